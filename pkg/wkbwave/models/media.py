"""
Separable medium models: dispersion factors eps1(omega), mu1(omega) and
spatial profiles eps2(z), mu2(z)
"""
import math
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator
from scipy.interpolate import CubicSpline


class DispersionKind(str, Enum):
    """Dispersion law presets"""
    CONSTANT = "constant"
    CAUCHY = "cauchy"
    TABULATED = "tabulated"


class ProfileKind(str, Enum):
    """Spatial profile presets"""
    CONSTANT = "constant"
    LORENTZIAN = "lorentzian"
    TABULATED = "tabulated"


class DispersionFactor(BaseModel):
    """
    Frequency factor eps1(omega) or mu1(omega), relative to eps0 / mu0.

    constant:  value
    cauchy:    A + B * omega**2
    tabulated: natural cubic spline through (omega_samples, samples); the
               samples are given on omega >= 0 and mirrored to negative omega
    """
    model_config = ConfigDict(frozen=True)

    kind: DispersionKind = DispersionKind.CONSTANT
    value: float = Field(1.0, gt=0)
    A: Optional[float] = Field(None, gt=0)
    B: Optional[float] = Field(None, gt=0)
    omega_samples: Optional[List[float]] = None
    samples: Optional[List[float]] = None

    _spline: Optional[CubicSpline] = PrivateAttr(default=None)
    _dspline: Optional[object] = PrivateAttr(default=None)

    @model_validator(mode="after")
    def _check_kind(self) -> "DispersionFactor":
        if self.kind == DispersionKind.CAUCHY and (self.A is None or self.B is None):
            raise ValueError("cauchy dispersion needs A > 0 and B > 0")
        if self.kind == DispersionKind.TABULATED:
            if self.omega_samples is None or self.samples is None:
                raise ValueError("tabulated dispersion needs omega_samples and samples")
            w = np.asarray(self.omega_samples, dtype=float)
            v = np.asarray(self.samples, dtype=float)
            if w.shape != v.shape or w.size < 4:
                raise ValueError("tabulated dispersion needs >= 4 matching samples")
            if np.any(w < 0) or np.any(np.diff(w) <= 0):
                raise ValueError("omega_samples must be non-negative and strictly increasing")
            if np.any(v <= 0):
                raise ValueError("tabulated dispersion samples must be positive")
        return self

    def model_post_init(self, __context) -> None:
        if self.kind != DispersionKind.TABULATED:
            return
        w = np.asarray(self.omega_samples, dtype=float)
        v = np.asarray(self.samples, dtype=float)
        # mirror so the spline is even in omega
        if w[0] == 0.0:
            ww = np.concatenate([-w[:0:-1], w])
            vv = np.concatenate([v[:0:-1], v])
        else:
            ww = np.concatenate([-w[::-1], w])
            vv = np.concatenate([v[::-1], v])
        self._spline = CubicSpline(ww, vv, bc_type="natural")
        self._dspline = self._spline.derivative()

    @property
    def tabulated_range(self) -> Optional[Tuple[float, float]]:
        if self.kind != DispersionKind.TABULATED:
            return None
        return (self.omega_samples[0], self.omega_samples[-1])

    def __call__(self, omega):
        """Evaluate the factor at omega (scalar or array)"""
        w = np.asarray(omega, dtype=float)
        if self.kind == DispersionKind.CONSTANT:
            out = np.full_like(w, self.value)
        elif self.kind == DispersionKind.CAUCHY:
            out = self.A + self.B * w ** 2
        else:
            out = self._spline(w)
        return out if out.ndim else float(out)

    def derivative(self, omega):
        """d/domega of the factor"""
        w = np.asarray(omega, dtype=float)
        if self.kind == DispersionKind.CONSTANT:
            out = np.zeros_like(w)
        elif self.kind == DispersionKind.CAUCHY:
            out = 2.0 * self.B * w
        else:
            out = self._dspline(w)
        return out if out.ndim else float(out)


class ProfileFactor(BaseModel):
    """
    Spatial factor eps2(z) or mu2(z) (absolute, includes eps0 / mu0).

    constant:   value
    lorentzian: base * (1 + a / (1 + z**2 / gamma**2))
    tabulated:  natural cubic spline through (z_samples, samples), clamped
                to the end values outside the knot range
    """
    model_config = ConfigDict(frozen=True)

    kind: ProfileKind = ProfileKind.CONSTANT
    value: float = Field(1.0, gt=0)
    base: float = Field(1.0, gt=0)
    a: Optional[float] = Field(None, gt=0)
    gamma: Optional[float] = Field(None, gt=0)
    z_samples: Optional[List[float]] = None
    samples: Optional[List[float]] = None

    _spline: Optional[CubicSpline] = PrivateAttr(default=None)

    @model_validator(mode="after")
    def _check_kind(self) -> "ProfileFactor":
        if self.kind == ProfileKind.LORENTZIAN and (self.a is None or self.gamma is None):
            raise ValueError("lorentzian profile needs a > 0 and gamma > 0")
        if self.kind == ProfileKind.TABULATED:
            if self.z_samples is None or self.samples is None:
                raise ValueError("tabulated profile needs z_samples and samples")
            z = np.asarray(self.z_samples, dtype=float)
            v = np.asarray(self.samples, dtype=float)
            if z.shape != v.shape or z.size < 4:
                raise ValueError("tabulated profile needs >= 4 matching samples")
            if np.any(np.diff(z) <= 0):
                raise ValueError("z_samples must be strictly increasing")
            if np.any(v <= 0):
                raise ValueError("tabulated profile samples must be positive")
        return self

    def model_post_init(self, __context) -> None:
        if self.kind == ProfileKind.TABULATED:
            self._spline = CubicSpline(
                np.asarray(self.z_samples, dtype=float),
                np.asarray(self.samples, dtype=float),
                bc_type="natural",
            )

    @classmethod
    def constant(cls, value: float) -> "ProfileFactor":
        return cls(kind=ProfileKind.CONSTANT, value=value)

    @classmethod
    def lorentzian(cls, a: float, gamma: float, base: float = 1.0) -> "ProfileFactor":
        return cls(kind=ProfileKind.LORENTZIAN, a=a, gamma=gamma, base=base)

    @property
    def is_constant(self) -> bool:
        return self.kind == ProfileKind.CONSTANT

    @property
    def knot_spacing(self) -> Optional[float]:
        """Largest knot spacing of a tabulated profile"""
        if self.kind != ProfileKind.TABULATED:
            return None
        return float(np.max(np.diff(self.z_samples)))

    def _tabulated(self, z: np.ndarray, order: int) -> np.ndarray:
        lo, hi = self.z_samples[0], self.z_samples[-1]
        inside = (z >= lo) & (z <= hi)
        out = np.empty_like(z)
        out[inside] = self._spline(z[inside], order)
        if order == 0:
            out[z < lo] = self.samples[0]
            out[z > hi] = self.samples[-1]
        else:
            out[~inside] = 0.0
        return out

    def _evaluate(self, z, order: int):
        x = np.asarray(z, dtype=float)
        if self.kind == ProfileKind.CONSTANT:
            out = np.full_like(x, self.value) if order == 0 else np.zeros_like(x)
        elif self.kind == ProfileKind.LORENTZIAN:
            s = x / self.gamma
            q = 1.0 + s ** 2
            if order == 0:
                out = self.base * (1.0 + self.a / q)
            elif order == 1:
                out = self.base * self.a * (-2.0 * s / self.gamma) / q ** 2
            else:
                out = self.base * self.a * (6.0 * s ** 2 - 2.0) / (self.gamma ** 2 * q ** 3)
        else:
            out = self._tabulated(np.atleast_1d(x), order).reshape(x.shape)
        return out if out.ndim else float(out)

    def __call__(self, z):
        return self._evaluate(z, 0)

    def derivative(self, z):
        return self._evaluate(z, 1)

    def second_derivative(self, z):
        return self._evaluate(z, 2)


class Units(BaseModel):
    """Physical constants; natural units by default"""
    model_config = ConfigDict(frozen=True)

    c: float = Field(1.0, gt=0)
    eps0: float = Field(1.0, gt=0)
    mu0: float = Field(1.0, gt=0)

    @model_validator(mode="after")
    def _consistent(self) -> "Units":
        expected = 1.0 / math.sqrt(self.eps0 * self.mu0)
        if abs(self.c - expected) > 1e-9 * expected:
            raise ValueError(f"c must equal 1/sqrt(eps0*mu0) = {expected:.12g}")
        return self


class FrequencyWindow(BaseModel):
    """Closed interval bounding |omega|"""
    model_config = ConfigDict(frozen=True)

    omega_min: float = Field(0.0, ge=0)
    omega_max: float = math.inf

    @model_validator(mode="after")
    def _ordered(self) -> "FrequencyWindow":
        if not self.omega_max > self.omega_min:
            raise ValueError("omega_max must exceed omega_min")
        return self

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.omega_max)

    def contains(self, omega) -> np.ndarray:
        w = np.abs(np.asarray(omega, dtype=float))
        return (w >= self.omega_min) & (w <= self.omega_max)


class MediumModel(BaseModel):
    """Separable medium eps = eps1(omega) eps2(z), mu = mu1(omega) mu2(z)"""
    model_config = ConfigDict(frozen=True)

    eps1: DispersionFactor = DispersionFactor()
    mu1: DispersionFactor = DispersionFactor()
    eps2: ProfileFactor = ProfileFactor()
    mu2: ProfileFactor = ProfileFactor()
    units: Units = Units()
    window: FrequencyWindow = FrequencyWindow()

    @model_validator(mode="after")
    def _check_window(self) -> "MediumModel":
        for name in ("eps1", "mu1"):
            factor: DispersionFactor = getattr(self, name)
            rng = factor.tabulated_range
            if rng is None:
                continue
            if not self.window.bounded:
                raise ValueError(f"{name} is tabulated: declare window.omega_max explicitly")
            if self.window.omega_max > rng[1] * (1 + 1e-12):
                raise ValueError(
                    f"window.omega_max={self.window.omega_max} exceeds {name} samples (max {rng[1]})"
                )
        return self

    @property
    def homogeneous(self) -> bool:
        return self.eps2.is_constant and self.mu2.is_constant

    @property
    def nondispersive(self) -> bool:
        return (
            self.eps1.kind == DispersionKind.CONSTANT and self.eps1.value == 1.0
            and self.mu1.kind == DispersionKind.CONSTANT and self.mu1.value == 1.0
        )


def lorentzian_medium(
    a: float,
    gamma: float,
    eps1: Optional[DispersionFactor] = None,
    units: Optional[Units] = None,
    window: Optional[FrequencyWindow] = None,
) -> MediumModel:
    """Nonmagnetic medium with eps2(z) = eps0 (1 + a / (1 + z^2/gamma^2)), mu2 = mu0"""
    units = units or Units()
    return MediumModel(
        eps1=eps1 or DispersionFactor(),
        mu1=DispersionFactor(),
        eps2=ProfileFactor.lorentzian(a=a, gamma=gamma, base=units.eps0),
        mu2=ProfileFactor.constant(units.mu0),
        units=units,
        window=window or FrequencyWindow(),
    )
