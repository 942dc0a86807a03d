"""
Sample grids in z and omega, and complex fields sampled on them
"""
from enum import Enum
from typing import List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.signal.windows import tukey
from scipy.special import erf


class TaperKind(str, Enum):
    """Window applied to input fields"""
    NONE = "none"
    COSINE = "cosine"
    ERF = "erf"


class Taper(BaseModel):
    """
    cosine: Tukey window, each edge ramp covers `fraction` of the window
    erf:    flat top with erf edges of width tau = fraction * L, edge centres
            4 tau inside the window ends
    """
    model_config = ConfigDict(frozen=True)

    kind: TaperKind = TaperKind.NONE
    fraction: float = Field(0.1, gt=0, lt=0.5)

    @model_validator(mode="after")
    def _erf_fits(self) -> "Taper":
        if self.kind == TaperKind.ERF and self.fraction >= 0.125:
            raise ValueError("erf taper needs fraction < 0.125")
        return self


class AxisGrid(BaseModel):
    """Uniform z grid with taper metadata"""
    model_config = ConfigDict(frozen=True)

    z_min: float
    z_max: float
    n: int = Field(..., ge=3)
    taper: Taper = Taper()

    @model_validator(mode="after")
    def _increasing(self) -> "AxisGrid":
        if not self.z_max > self.z_min:
            raise ValueError("z_max must exceed z_min")
        return self

    def __len__(self) -> int:
        return self.n

    @property
    def length(self) -> float:
        return self.z_max - self.z_min

    @property
    def dz(self) -> float:
        return self.length / (self.n - 1)

    @property
    def z(self) -> np.ndarray:
        z = np.linspace(self.z_min, self.z_max, self.n)
        z.flags.writeable = False
        return z

    @property
    def points(self) -> np.ndarray:
        return self.z

    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(self.n, self.dz)
        w[0] = w[-1] = 0.5 * self.dz
        return w

    @property
    def taper_length(self) -> float:
        if self.taper.kind == TaperKind.NONE:
            return self.length
        return self.taper.fraction * self.length

    def taper_weights(self) -> np.ndarray:
        if self.taper.kind == TaperKind.NONE:
            return np.ones(self.n)
        if self.taper.kind == TaperKind.COSINE:
            return tukey(self.n, alpha=2.0 * self.taper.fraction)
        tau = self.taper.fraction * self.length
        z_lo = self.z_min + 4.0 * tau
        z_hi = self.z_max - 4.0 * tau
        return 0.5 * (erf((self.z - z_lo) / tau) - erf((self.z - z_hi) / tau))

    def refined(self, factor: int) -> "AxisGrid":
        return AxisGrid(
            z_min=self.z_min, z_max=self.z_max, n=(self.n - 1) * factor + 1, taper=self.taper
        )


class FrequencyKind(str, Enum):
    UNIFORM = "uniform"
    NATURAL = "natural"


class FrequencyGrid(BaseModel):
    """
    Increasing omega samples with quadrature cell widths.

    uniform: constant spacing domega
    natural: uniform in f(omega); cell widths df / f'(omega_j)
    """
    model_config = ConfigDict(frozen=True)

    kind: FrequencyKind = FrequencyKind.UNIFORM
    omega: List[float]
    widths: List[float]

    @model_validator(mode="after")
    def _check(self) -> "FrequencyGrid":
        if len(self.omega) < 1 or len(self.omega) != len(self.widths):
            raise ValueError("omega and widths must be non-empty and of equal length")
        if np.any(np.diff(self.omega) <= 0):
            raise ValueError("omega samples must be strictly increasing")
        if np.any(np.asarray(self.widths) <= 0):
            raise ValueError("cell widths must be positive")
        return self

    @classmethod
    def uniform(cls, omega_min: float, omega_max: float, n: int) -> "FrequencyGrid":
        if n < 2:
            raise ValueError("uniform frequency grid needs n >= 2")
        omega = np.linspace(omega_min, omega_max, n)
        return cls(
            kind=FrequencyKind.UNIFORM,
            omega=omega.tolist(),
            widths=[float(omega[1] - omega[0])] * n,
        )

    @classmethod
    def single(cls, omega: float, width: float) -> "FrequencyGrid":
        return cls(kind=FrequencyKind.UNIFORM, omega=[omega], widths=[width])

    def __len__(self) -> int:
        return len(self.omega)

    @property
    def n(self) -> int:
        return len(self.omega)

    @property
    def omega_min(self) -> float:
        return self.omega[0]

    @property
    def omega_max(self) -> float:
        return self.omega[-1]

    @property
    def points(self) -> np.ndarray:
        w = np.asarray(self.omega, dtype=float)
        w.flags.writeable = False
        return w

    @property
    def cell_widths(self) -> np.ndarray:
        return np.asarray(self.widths, dtype=float)

    def trapezoid_weights(self) -> np.ndarray:
        w = self.cell_widths.copy()
        if w.size > 1:
            w[0] *= 0.5
            w[-1] *= 0.5
        return w


Grid = Union[AxisGrid, FrequencyGrid]


class SampledField(BaseModel):
    """Complex samples on an AxisGrid or FrequencyGrid"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid
    values: np.ndarray
    label: str = ""

    @field_validator("values", mode="before")
    @classmethod
    def _as_array(cls, v) -> np.ndarray:
        arr = np.array(v, dtype=complex)
        arr.flags.writeable = False
        return arr

    @model_validator(mode="after")
    def _length(self) -> "SampledField":
        if self.values.ndim != 1 or self.values.size != len(self.grid):
            raise ValueError(
                f"field has {self.values.size} samples, grid has {len(self.grid)}"
            )
        return self

    @property
    def points(self) -> np.ndarray:
        return self.grid.points

    def norm(self, weights: Optional[np.ndarray] = None) -> float:
        """L2 norm with trapezoid weights of the grid"""
        w = self.grid.trapezoid_weights() if weights is None else weights
        return float(np.sqrt(np.sum(w * np.abs(self.values) ** 2)))

    def with_values(self, values, label: Optional[str] = None) -> "SampledField":
        return SampledField(grid=self.grid, values=values, label=self.label if label is None else label)
