"""
Dispersion service: n1(omega), f(omega) = omega n1(omega) and its inverse
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel
from scipy.optimize import brentq

from wkbwave.exceptions import ConvergenceFailure, NonMonotone, OutOfRange, OutOfWindow
from wkbwave.models.media import MediumModel

logger = logging.getLogger(__name__)


class MonotoneCheck(BaseModel):
    """Outcome of the monotonicity gate"""
    ok: bool
    omega_fail: Optional[float] = None
    samples: int = 0

    def raise_for_failure(self) -> None:
        if not self.ok:
            raise NonMonotone(self.omega_fail)


def _check_window(model: MediumModel, omega) -> np.ndarray:
    w = np.asarray(omega, dtype=float)
    inside = model.window.contains(w)
    if not np.all(inside):
        bad = float(np.atleast_1d(w)[~np.atleast_1d(inside)][0])
        raise OutOfWindow(bad, (model.window.omega_min, model.window.omega_max))
    return w


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def n1(model: MediumModel, omega):
    """n1(omega) = sqrt(eps1(omega) mu1(omega))"""
    w = _check_window(model, omega)
    product = np.asarray(model.eps1(w)) * np.asarray(model.mu1(w))
    if np.any(product <= 0):
        raise ValueError("eps1 * mu1 must be positive on the frequency window")
    return _scalar(np.sqrt(product))


def n1_derivative(model: MediumModel, omega):
    """d n1 / d omega by the chain rule on the dispersion factors"""
    w = _check_window(model, omega)
    e, m = np.asarray(model.eps1(w)), np.asarray(model.mu1(w))
    de, dm = np.asarray(model.eps1.derivative(w)), np.asarray(model.mu1.derivative(w))
    return _scalar((de * m + e * dm) / (2.0 * np.sqrt(e * m)))


def f_values(model: MediumModel, omega):
    """f(omega) = omega n1(omega), no monotonicity check"""
    w = np.asarray(omega, dtype=float)
    return _scalar(w * np.asarray(n1(model, w)))


def f_prime_values(model: MediumModel, omega):
    """f'(omega), no monotonicity check"""
    w = np.asarray(omega, dtype=float)
    return _scalar(np.asarray(n1(model, w)) + w * np.asarray(n1_derivative(model, w)))


def f_and_derivative(model: MediumModel, omega) -> Tuple:
    """
    Evaluate f(omega) = omega n1(omega) and f'(omega) = n1 + omega n1'

    Args:
        model: Medium model
        omega: Angular frequency (scalar or array), inside the declared window

    Returns:
        (f, f') with the shape of omega

    Raises:
        NonMonotone: at the first sample where f' <= 0
    """
    w = np.asarray(omega, dtype=float)
    n = np.asarray(n1(model, w))
    fp = n + w * np.asarray(n1_derivative(model, w))
    bad = np.atleast_1d(fp) <= 0
    if np.any(bad):
        idx = int(np.argmax(bad))
        raise NonMonotone(float(np.atleast_1d(w)[idx]), float(np.atleast_1d(fp)[idx]))
    return _scalar(w * n), _scalar(fp)


def validate_monotone(
    model: MediumModel,
    window: Optional[Tuple[float, float]] = None,
    samples: int = 2001,
) -> MonotoneCheck:
    """
    Check f'(omega) > 0 on a uniform sample of a frequency interval

    Args:
        model: Medium model
        window: (omega_lo, omega_hi); defaults to the model's declared window
        samples: Number of uniform samples (>= 2)

    Returns:
        MonotoneCheck with the first failing frequency, if any
    """
    if samples < 2:
        raise ValueError("validate_monotone needs samples >= 2")
    if window is None:
        if not model.window.bounded:
            raise ValueError("unbounded window: pass an explicit interval")
        window = (model.window.omega_min, model.window.omega_max)
    lo, hi = float(window[0]), float(window[1])
    omega = np.linspace(lo, hi, samples)
    fp = np.asarray(f_prime_values(model, omega))
    bad = fp <= 0
    if np.any(bad):
        omega_fail = float(omega[int(np.argmax(bad))])
        logger.warning(f"f is not monotone on [{lo}, {hi}]: first failure at omega={omega_fail:.6g}")
        return MonotoneCheck(ok=False, omega_fail=omega_fail, samples=samples)
    return MonotoneCheck(ok=True, samples=samples)


def _root(fn, lo: float, hi: float, target: float, what: str) -> float:
    try:
        root = brentq(fn, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    except (RuntimeError, ValueError) as e:
        raise ConvergenceFailure(f"{what}: root finding failed: {e}") from e
    residual = abs(fn(root))
    if residual > 1e-12 * max(1.0, abs(target)):
        raise ConvergenceFailure(f"{what}: residual {residual:.3e} above tolerance")
    return float(root)


def _bracket(model: MediumModel, fn, target: float) -> Tuple[float, float]:
    lo = model.window.omega_min
    if model.window.bounded:
        hi = model.window.omega_max
        if fn(lo) > 0 or fn(hi) < 0:
            raise OutOfRange(f"{target!r} outside f(window) = [{fn(lo) + target:.6g}, {fn(hi) + target:.6g}]")
        return lo, hi
    if fn(lo) > 0:
        raise OutOfRange(f"{target!r} below f(omega_min)")
    hi = max(1.0, 2.0 * lo)
    for _ in range(200):
        if fn(hi) >= 0:
            return lo, hi
        hi *= 2.0
    raise OutOfRange(f"{target!r} not reached by f on the window")


def invert_f(model: MediumModel, value: float) -> float:
    """
    Solve f(omega) = value for omega (odd extension for negative values)

    Raises:
        OutOfRange: value outside f(window)
    """
    value = float(value)
    if value < 0:
        return -invert_f(model, -value)
    if value == 0.0 and model.window.omega_min == 0.0:
        return 0.0

    def fn(w: float) -> float:
        return float(f_values(model, w)) - value

    lo, hi = _bracket(model, fn, value)
    return _root(fn, lo, hi, value, "f inversion")


def k_medium(model: MediumModel, omega):
    """Medium wavenumber omega sqrt(eps1(omega)) / c"""
    w = _check_window(model, omega)
    return _scalar(w * np.sqrt(np.asarray(model.eps1(w))) / model.units.c)


def k_medium_inverse(model: MediumModel, k: float) -> float:
    """omega with k_medium(omega) = k"""
    k = float(k)
    if k < 0:
        return -k_medium_inverse(model, -k)

    def fn(w: float) -> float:
        return float(k_medium(model, w)) - k

    lo, hi = _bracket(model, fn, k)
    return _root(fn, lo, hi, k, "wavenumber inversion")


def natural_spacing(model: MediumModel, omega: float, length: float, v2: float = 1.0) -> float:
    """Frequency spacing 2 pi v2 / (L f'(omega)) at which windowed modes are orthogonal"""
    _, fp = f_and_derivative(model, omega)
    return 2.0 * math.pi * v2 / (length * fp)
