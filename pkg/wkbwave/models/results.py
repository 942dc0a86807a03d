"""
Result containers produced by the wkb, spectral, modes and perturb services
"""
import math
from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from wkbwave.models.grids import AxisGrid, FrequencyGrid, SampledField
from wkbwave.models.media import DispersionFactor, FrequencyWindow, MediumModel, Units, lorentzian_medium


def _frozen_array(v, dtype=float) -> np.ndarray:
    arr = np.array(v, dtype=dtype)
    arr.flags.writeable = False
    return arr


class PhaseTable(BaseModel):
    """v2(z) = 1/sqrt(eps2 mu2) and u2(z) = int_0^z dz'/v2 on a grid"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: AxisGrid
    v2: np.ndarray
    u2: np.ndarray
    origin_index: Optional[int] = None  # grid index nearest z = 0, None if 0 is off-grid

    @field_validator("v2", "u2", mode="before")
    @classmethod
    def _arrays(cls, v) -> np.ndarray:
        return _frozen_array(v)

    @property
    def u_extent(self) -> float:
        return float(self.u2[-1] - self.u2[0])


class ValidityReport(BaseModel):
    """Pointwise left side of the WKB validity condition"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: AxisGrid
    lhs: np.ndarray

    @field_validator("lhs", mode="before")
    @classmethod
    def _array(cls, v) -> np.ndarray:
        return _frozen_array(v)

    @property
    def max_lhs(self) -> float:
        return float(np.max(self.lhs))

    def margin_at(self, omega) -> float:
        """omega^2 / max(lhs); infinite when the medium is WKB-exact"""
        peak = self.max_lhs
        if peak == 0.0:
            return math.inf
        return float(np.asarray(omega) ** 2 / peak)

    def margins(self, omegas) -> np.ndarray:
        w = np.asarray(omegas, dtype=float)
        peak = self.max_lhs
        if peak == 0.0:
            return np.full(w.shape, math.inf)
        return w ** 2 / peak

    def violations(self, omega: float, threshold: float = 100.0) -> np.ndarray:
        """Mask of z samples where omega^2 / lhs(z) < threshold"""
        with np.errstate(divide="ignore"):
            local = np.where(self.lhs > 0, omega ** 2 / self.lhs, math.inf)
        return local < threshold


class Boundary(str, Enum):
    DIRICHLET = "dirichlet"
    PERIODIC = "periodic"


class DiscreteOperator(BaseModel):
    """
    Symmetric discretization of h2 on the unknown samples of a grid.

    dirichlet: unknowns are the interior samples, tridiagonal
    periodic:  unknowns are samples 0..n-2 (z_max identified with z_min),
               tridiagonal plus the corner entry `corner`
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: AxisGrid
    boundary: Boundary
    diag: np.ndarray
    offdiag: np.ndarray
    corner: float = 0.0
    scale: np.ndarray  # eps2^{-1/2} on the unknowns
    provenance: str = ""

    @field_validator("diag", "offdiag", "scale", mode="before")
    @classmethod
    def _arrays(cls, v) -> np.ndarray:
        return _frozen_array(v)

    @property
    def size(self) -> int:
        return int(self.diag.size)

    @property
    def unknowns(self) -> slice:
        if self.boundary == Boundary.DIRICHLET:
            return slice(1, self.grid.n - 1)
        return slice(0, self.grid.n - 1)

    def dense(self) -> np.ndarray:
        m = np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)
        if self.boundary == Boundary.PERIODIC and self.size > 2:
            m[0, -1] += self.corner
            m[-1, 0] += self.corner
        return m

    @property
    def norm(self) -> float:
        """Infinity norm (max absolute row sum)"""
        rows = np.abs(self.diag).copy()
        rows[:-1] += np.abs(self.offdiag)
        rows[1:] += np.abs(self.offdiag)
        if self.boundary == Boundary.PERIODIC:
            rows[0] += abs(self.corner)
            rows[-1] += abs(self.corner)
        return float(np.max(rows))

    def to_grid(self, unknown_values: np.ndarray) -> np.ndarray:
        """Embed values on the unknowns into the full grid"""
        full = np.zeros(self.grid.n, dtype=np.result_type(unknown_values, float))
        full[self.unknowns] = unknown_values
        if self.boundary == Boundary.PERIODIC:
            full[-1] = full[0]
        return full


class EigenPair(BaseModel):
    """Eigenvalue of h2, box-normalized eigenvector and mapped frequency"""
    model_config = ConfigDict(frozen=True)

    lam: float
    vector: SampledField
    omega: Optional[float] = None


class ModeFunction(BaseModel):
    """Samples of the mode function c(omega)"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: FrequencyGrid
    values: np.ndarray
    source: str = ""

    @field_validator("values", mode="before")
    @classmethod
    def _array(cls, v) -> np.ndarray:
        arr = _frozen_array(v, dtype=complex)
        if not np.all(np.isfinite(arr)):
            raise ValueError("mode function values must be finite")
        return arr

    def as_field(self) -> SampledField:
        return SampledField(grid=self.grid, values=self.values, label=self.source)


class LorentzCase(BaseModel):
    """Nonmagnetic Lorentzian inhomogeneity illuminated by a plane wave of wavenumber k"""
    model_config = ConfigDict(frozen=True)

    a: float = Field(..., gt=0)
    gamma: float = Field(..., gt=0)
    k: float = Field(..., gt=0)
    eps1: DispersionFactor = DispersionFactor()
    units: Units = Units()
    window: FrequencyWindow = FrequencyWindow()
    amplitude: Optional[float] = None  # input plane-wave amplitude; None = background plane-wave amplitude at omega*

    def medium(self, a: Optional[float] = None) -> MediumModel:
        """Medium at strength `a` (default: the case's own); a = 0 gives the background"""
        strength = self.a if a is None else a
        if strength == 0.0:
            return self.background()
        return lorentzian_medium(
            a=strength,
            gamma=self.gamma,
            eps1=self.eps1,
            units=self.units,
            window=self.window,
        )

    def background(self) -> MediumModel:
        """The a = 0 medium (homogeneous eps2 = eps0)"""
        return MediumModel(eps1=self.eps1, units=self.units, window=self.window,
                           eps2={"kind": "constant", "value": self.units.eps0},
                           mu2={"kind": "constant", "value": self.units.mu0})


class DecayFit(BaseModel):
    """Exponential fit of the first-order bracket against |k - K(omega)|"""
    model_config = ConfigDict(frozen=True)

    rate: float
    intercept: float
    expected_rate: float
    samples: int
    omega: List[float]
    relative_deviation: List[float]

    @property
    def max_relative_deviation(self) -> float:
        return max(self.relative_deviation) if self.relative_deviation else math.nan

    @property
    def rate_error(self) -> float:
        """|rate - gamma| / gamma"""
        return abs(self.rate - self.expected_rate) / self.expected_rate
