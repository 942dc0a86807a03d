"""
Lorentzian inhomogeneity: plane-wave constants, the first-order mode
function and its finite-difference oracle
"""
import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from wkbwave.exceptions import DegenerateStep, NotHomogeneous, ResonanceProximity
from wkbwave.models.grids import AxisGrid, FrequencyGrid
from wkbwave.models.media import MediumModel
from wkbwave.models.results import DecayFit, LorentzCase, ModeFunction
from wkbwave.services.media import k_medium, k_medium_inverse, n1, n1_derivative
from wkbwave.services.modes import project, windowed_plane_wave
from wkbwave.services.wkb import build_phase_table

logger = logging.getLogger(__name__)


def plane_wave_constants(model: MediumModel, omega: float) -> Tuple[float, float]:
    """
    Amplitude and wavenumber of the WKB field in a homogeneous medium

    A = (mu/eps)^{1/4} sqrt((1 + omega n1'/n1) / (2 pi)), k = omega sqrt(eps mu)
    with eps = eps1(omega) eps2, mu = mu1(omega) mu2.

    Raises:
        NotHomogeneous: eps2 or mu2 is not constant
    """
    if not model.homogeneous:
        raise NotHomogeneous("plane_wave_constants needs constant eps2 and mu2")
    eps = float(model.eps1(omega)) * float(model.eps2(0.0))
    mu = float(model.mu1(omega)) * float(model.mu2(0.0))
    index = float(n1(model, omega))
    amplitude = (mu / eps) ** 0.25 * math.sqrt((1.0 + omega * float(n1_derivative(model, omega)) / index)
                                               / (2.0 * math.pi))
    k = omega * math.sqrt(eps * mu)

    v2 = 1.0 / math.sqrt(float(model.eps2(0.0)) * float(model.mu2(0.0)))
    if abs(k - omega * index / v2) > 1e-12 * max(1.0, abs(k)):
        raise ArithmeticError(f"k={k!r} disagrees with omega n1 / v2")
    return amplitude, k


def wavenumber(case: LorentzCase, omega):
    """K(omega) = omega sqrt(eps1(omega)) / c"""
    return k_medium(case.background(), omega)


def frak_amplitude(case: LorentzCase, omega, amplitude: Optional[float] = None):
    """
    Weight of the delta term for a unit-normalized plane-wave input

    A sqrt((2 pi eps0 eps1^{3/2} / c) (1 + omega eps1' / (2 eps1)))
    """
    a_in = input_amplitude(case) if amplitude is None else amplitude
    w = np.asarray(omega, dtype=float)
    e = np.asarray(case.eps1(w))
    de = np.asarray(case.eps1.derivative(w))
    value = a_in * np.sqrt(2.0 * math.pi * case.units.eps0 * e ** 1.5 / case.units.c * (1.0 + w * de / (2.0 * e)))
    return float(value) if np.ndim(value) == 0 else value


def resonance_peak(case: LorentzCase) -> Tuple[float, float]:
    """(omega*, weight) with K(omega*) = k"""
    omega_star = k_medium_inverse(case.background(), case.k)
    return omega_star, frak_amplitude(case, omega_star)


def input_amplitude(case: LorentzCase) -> float:
    """Plane-wave amplitude A; defaults to the background WKB amplitude at omega*"""
    if case.amplitude is not None:
        return case.amplitude
    omega_star = k_medium_inverse(case.background(), case.k)
    return plane_wave_constants(case.background(), omega_star)[0]


def default_exclusion_radius(case: LorentzCase, length: float) -> float:
    """max(3 * 2 pi / L, 0.2 / gamma) in wavenumber units"""
    return max(3.0 * 2.0 * math.pi / length, 0.2 / case.gamma)


def resonance_mask(case: LorentzCase, omega_grid: FrequencyGrid, radius: float) -> np.ndarray:
    """True where |k - K(omega)| < radius"""
    detuning = case.k - np.asarray(wavenumber(case, omega_grid.points))
    return np.abs(detuning) < radius


def analytic_bracket(case: LorentzCase, omega) -> np.ndarray:
    """exp(-gamma |k - K|) (3k - K) / (8 (k - K)), diverging at K = k"""
    big_k = np.asarray(wavenumber(case, omega), dtype=float)
    detuning = case.k - big_k
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.exp(-case.gamma * np.abs(detuning)) * (3.0 * case.k - big_k) / (8.0 * detuning)


def mode_function_first_order(case: LorentzCase, omega_grid: FrequencyGrid,
                              radius: Optional[float] = None, length: Optional[float] = None) -> ModeFunction:
    """
    Order-a part of c(omega): weight(omega) * gamma * a * bracket(omega)

    The delta term is reported by resonance_peak.

    Args:
        case: Lorentzian case
        omega_grid: Frequency samples, all outside the exclusion radius
        radius: Exclusion radius in wavenumber units (default from the window length)
        length: Window length used for the default radius

    Raises:
        ResonanceProximity: samples with |k - K(omega)| < radius
    """
    if radius is None:
        if length is None:
            raise ValueError("pass an exclusion radius or the window length")
        radius = default_exclusion_radius(case, length)
    inside = resonance_mask(case, omega_grid, radius)
    if np.any(inside):
        logger.warning(f"{int(np.sum(inside))} frequency sample(s) inside the exclusion radius {radius:.4g}")
        raise ResonanceProximity(omega_grid.points[inside], radius)
    omega = omega_grid.points
    values = frak_amplitude(case, omega) * case.gamma * case.a * analytic_bracket(case, omega)
    return ModeFunction(grid=omega_grid, values=values, source=f"first order (a={case.a:.17g})")


def _mode_function_at(case: LorentzCase, a: float, omega_grid: FrequencyGrid, zgrid: AxisGrid) -> np.ndarray:
    model = case.medium(a)
    table = build_phase_table(model, zgrid)
    e0 = windowed_plane_wave(zgrid, case.k, input_amplitude(case))
    return project(model, table, omega_grid, e0).values


def numeric_mode_derivative(case: LorentzCase, omega_grid: FrequencyGrid, zgrid: AxisGrid,
                            a_steps: Sequence[float]) -> ModeFunction:
    """
    (c(omega; a2) - c(omega; a1)) / (a2 - a1) from two projections of the
    windowed plane wave; the delta peak cancels away from omega*

    Raises:
        DegenerateStep: a1 == a2
    """
    a1, a2 = (float(a) for a in a_steps)
    if a1 == a2:
        raise DegenerateStep(f"a steps coincide ({a1!r})")
    if not 0.0 <= a1 < a2:
        raise ValueError("a_steps must satisfy 0 <= a1 < a2")
    c1 = _mode_function_at(case, a1, omega_grid, zgrid)
    c2 = _mode_function_at(case, a2, omega_grid, zgrid)
    logger.info(f"Finite-difference mode derivative over a in [{a1:.4g}, {a2:.4g}] on {omega_grid.n} samples")
    return ModeFunction(grid=omega_grid, values=(c2 - c1) / (a2 - a1),
                        source=f"dc/da (a1={a1:.17g}, a2={a2:.17g})")


def second_difference(case: LorentzCase, omega_grid: FrequencyGrid, zgrid: AxisGrid,
                      a_steps: Sequence[float]) -> ModeFunction:
    """c(a1) - 2 c(a2) + c(a3) for equally spaced a1 < a2 < a3; O(h^2) in the step h"""
    a1, a2, a3 = (float(a) for a in a_steps)
    if a1 == a2 or a2 == a3:
        raise DegenerateStep("a steps coincide")
    if not math.isclose(a2 - a1, a3 - a2, rel_tol=1e-9):
        raise ValueError("a steps must be equally spaced")
    values = sum(w * _mode_function_at(case, a, omega_grid, zgrid)
                 for w, a in ((1.0, a1), (-2.0, a2), (1.0, a3)))
    return ModeFunction(grid=omega_grid, values=values, source=f"second difference (h={a2 - a1:.17g})")


def numeric_bracket(case: LorentzCase, derivative: ModeFunction) -> np.ndarray:
    """dc/da divided by gamma * weight(omega), comparable with analytic_bracket"""
    return derivative.values / (case.gamma * frak_amplitude(case, derivative.grid.points))


def fit_decay_rate(case: LorentzCase, derivative: ModeFunction,
                   window: Tuple[float, float] = (1.0, 4.0)) -> DecayFit:
    """
    Least-squares slope of log|bracket * 8 (k - K) / (3k - K)| against |k - K|
    over gamma |k - K| in `window`, plus relative deviations from the
    analytic bracket on the same samples

    Returns:
        DecayFit whose rate should equal gamma
    """
    omega = derivative.grid.points
    big_k = np.asarray(wavenumber(case, omega), dtype=float)
    detuning = case.k - big_k
    reach = case.gamma * np.abs(detuning)
    numeric = numeric_bracket(case, derivative)
    analytic = analytic_bracket(case, omega)

    factor = np.abs(3.0 * case.k - big_k)
    mask = (reach >= window[0]) & (reach <= window[1]) & (factor > 1e-3 * case.k) & (np.abs(numeric) > 0)
    if int(np.sum(mask)) < 2:
        raise ValueError(f"fewer than two samples with gamma |k - K| in {window}")

    y = np.log(np.abs(numeric[mask]) * 8.0 * np.abs(detuning[mask]) / factor[mask])
    slope, intercept = np.polyfit(np.abs(detuning[mask]), y, 1)
    deviation = np.abs(numeric[mask] - analytic[mask]) / np.abs(analytic[mask])
    fit = DecayFit(
        rate=float(-slope),
        intercept=float(intercept),
        expected_rate=case.gamma,
        samples=int(np.sum(mask)),
        omega=omega[mask].tolist(),
        relative_deviation=deviation.tolist(),
    )
    logger.info(f"Decay fit: rate {fit.rate:.6g} (gamma {case.gamma:.6g}), "
                f"max relative deviation {fit.max_relative_deviation:.3e}")
    return fit
