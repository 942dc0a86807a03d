"""
Experiment configuration schemas (YAML documents validated by pydantic)
"""
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from wkbwave.exceptions import ConfigError
from wkbwave.models.grids import AxisGrid, FrequencyKind, SampledField
from wkbwave.models.media import MediumModel
from wkbwave.models.results import Boundary, LorentzCase
from wkbwave.services.modes import gaussian_packet, windowed_plane_wave

logger = logging.getLogger(__name__)


class OmegaGridConfig(BaseModel):
    """Frequency grid: natural (uniform in f) or uniform in omega; symmetric windows reach negative omega"""
    model_config = ConfigDict(extra="forbid")

    kind: FrequencyKind = FrequencyKind.NATURAL
    omega_min: float
    omega_max: float
    n: Optional[int] = Field(None, ge=2)

    @model_validator(mode="after")
    def _check(self) -> "OmegaGridConfig":
        if not self.omega_max > self.omega_min:
            raise ValueError("omega_max must exceed omega_min")
        if self.kind == FrequencyKind.UNIFORM and self.n is None:
            raise ValueError("uniform grid needs n")
        return self


class FieldKind(str, Enum):
    GAUSSIAN = "gaussian"
    PLANE = "plane"
    TABULATED = "tabulated"


class Direction(str, Enum):
    """Initial time derivative used by the spectral method"""
    RIGHT = "right"    # dE/dt = -v2 dE/dz
    LEFT = "left"      # dE/dt = +v2 dE/dz
    STANDING = "standing"  # dE/dt = 0


class InitialFieldConfig(BaseModel):
    """
    gaussian: amplitude exp(-(z - z0)^2 / (2 sigma^2)) exp(i k0 (z - z0))
    plane:    amplitude exp(i k z)
    tabulated: CSV with columns z, re, im interpolated onto the z grid
    """
    model_config = ConfigDict(extra="forbid")

    kind: FieldKind = FieldKind.GAUSSIAN
    sigma: Optional[float] = Field(None, gt=0)
    z0: float = 0.0
    k0: float = 0.0
    k: Optional[float] = None
    amplitude: float = 1.0
    direction: Direction = Direction.RIGHT
    z_samples: Optional[List[float]] = None
    re: Optional[List[float]] = None
    im: Optional[List[float]] = None

    @model_validator(mode="after")
    def _check(self) -> "InitialFieldConfig":
        if self.kind == FieldKind.GAUSSIAN and self.sigma is None:
            raise ValueError("gaussian field needs sigma")
        if self.kind == FieldKind.PLANE and self.k is None:
            raise ValueError("plane field needs k")
        if self.kind == FieldKind.TABULATED:
            if self.z_samples is None or self.re is None:
                raise ValueError("tabulated field needs a file (or z_samples/re/im)")
            if self.im is not None and len(self.im) != len(self.re):
                raise ValueError("re and im lengths differ")
            if len(self.z_samples) != len(self.re):
                raise ValueError("z_samples and re lengths differ")
        return self

    def sample(self, grid: AxisGrid) -> SampledField:
        """Initial field on the z grid"""
        if self.kind == FieldKind.GAUSSIAN:
            return gaussian_packet(grid, self.sigma, self.z0, self.k0, self.amplitude)
        if self.kind == FieldKind.PLANE:
            return windowed_plane_wave(grid, self.k, self.amplitude)
        z = np.asarray(self.z_samples, dtype=float)
        re = np.interp(grid.z, z, np.asarray(self.re, dtype=float), left=0.0, right=0.0)
        im = np.interp(grid.z, z, np.asarray(self.im or [0.0] * len(self.re), dtype=float), left=0.0, right=0.0)
        return SampledField(grid=grid, values=self.amplitude * (re + 1j * im), label="tabulated")


class Method(str, Enum):
    WKB = "wkb"
    SPECTRAL = "spectral"


class EigenConfig(BaseModel):
    """k lowest eigenpairs, or all pairs in (lam_min, lam_max]"""
    model_config = ConfigDict(extra="forbid")

    k: int = Field(10, ge=1)
    lam_min: Optional[float] = None
    lam_max: Optional[float] = None
    write_vectors: bool = True

    @model_validator(mode="after")
    def _check(self) -> "EigenConfig":
        if (self.lam_min is None) != (self.lam_max is None):
            raise ValueError("give both lam_min and lam_max or neither")
        return self

    @property
    def interval(self) -> Optional[Tuple[float, float]]:
        if self.lam_min is None:
            return None
        return (self.lam_min, self.lam_max)


class LorentzConfig(BaseModel):
    """Lorentzian inhomogeneity illuminated by a windowed plane wave"""
    model_config = ConfigDict(extra="forbid")

    a: float = Field(0.01, gt=0)
    gamma: float = Field(5.0, gt=0)
    k: float = Field(1.0, gt=0)
    a_steps: List[float] = [0.005, 0.01]
    amplitude: Optional[float] = None
    exclusion_radius: Optional[float] = Field(None, gt=0)
    fit_window: List[float] = [1.0, 4.0]

    @field_validator("a_steps")
    @classmethod
    def _two_steps(cls, v: List[float]) -> List[float]:
        if len(v) != 2:
            raise ValueError("a_steps needs exactly two values")
        return v

    @field_validator("fit_window")
    @classmethod
    def _window(cls, v: List[float]) -> List[float]:
        if len(v) != 2 or not 0 <= v[0] < v[1]:
            raise ValueError("fit_window must be [lo, hi] with 0 <= lo < hi")
        return v


class OutputConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    directory: Optional[str] = None
    write_validity: bool = True


class ExperimentConfig(BaseModel):
    """Top-level experiment document"""
    model_config = ConfigDict(extra="forbid")

    medium: Optional[MediumModel] = None
    zgrid: Optional[AxisGrid] = None
    omega_grid: Optional[OmegaGridConfig] = None
    boundary: Boundary = Boundary.DIRICHLET
    initial_field: Optional[InitialFieldConfig] = None
    times: List[float] = [0.0]
    method: Method = Method.WKB
    eigen: EigenConfig = EigenConfig()
    lorentz: Optional[LorentzConfig] = None
    output: OutputConfig = OutputConfig()

    def require(self, *keys: str) -> None:
        """Raise ConfigError naming the first missing top-level block"""
        for key in keys:
            if getattr(self, key) is None:
                raise ConfigError("required for this command", key=key)

    def lorentz_case(self) -> LorentzCase:
        self.require("lorentz")
        medium = self.medium or MediumModel()
        return LorentzCase(
            a=self.lorentz.a,
            gamma=self.lorentz.gamma,
            k=self.lorentz.k,
            eps1=medium.eps1,
            units=medium.units,
            window=medium.window,
            amplitude=self.lorentz.amplitude,
        )

    def to_resolved_yaml(self) -> str:
        """Fully-defaulted document; loading it reproduces the run"""
        return yaml.safe_dump(_plain(self.model_dump(exclude_none=True)), sort_keys=True,
                              default_flow_style=False)


def _plain(obj: Any) -> Any:
    """Enums to values, containers to builtin containers (for yaml.safe_dump)"""
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _read_table(path: Path, columns: List[str], key: str) -> pd.DataFrame:
    if not path.is_file():
        raise ConfigError(f"file not found: {path}", key=key)
    frame = pd.read_csv(path)
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise ConfigError(f"{path.name} lacks column(s) {missing}", key=key)
    return frame


def _inline_files(doc: Dict[str, Any], base: Path) -> Dict[str, Any]:
    """Replace `file:` references by inline samples"""
    medium = doc.get("medium")
    if isinstance(medium, dict):
        for name in ("eps1", "mu1"):
            factor = medium.get(name)
            if isinstance(factor, dict) and "file" in factor:
                frame = _read_table(base / factor.pop("file"), ["omega", "value"], f"medium.{name}.file")
                factor.setdefault("kind", "tabulated")
                factor["omega_samples"] = frame["omega"].astype(float).tolist()
                factor["samples"] = frame["value"].astype(float).tolist()
        for name in ("eps2", "mu2"):
            factor = medium.get(name)
            if isinstance(factor, dict) and "file" in factor:
                frame = _read_table(base / factor.pop("file"), ["z", "value"], f"medium.{name}.file")
                factor.setdefault("kind", "tabulated")
                factor["z_samples"] = frame["z"].astype(float).tolist()
                factor["samples"] = frame["value"].astype(float).tolist()
    field = doc.get("initial_field")
    if isinstance(field, dict) and "file" in field:
        frame = _read_table(base / field.pop("file"), ["z", "re"], "initial_field.file")
        field.setdefault("kind", "tabulated")
        field["z_samples"] = frame["z"].astype(float).tolist()
        field["re"] = frame["re"].astype(float).tolist()
        if "im" in frame.columns:
            field["im"] = frame["im"].astype(float).tolist()
    return doc


def parse_config(doc: Union[Dict[str, Any], None], base: Optional[Path] = None) -> ExperimentConfig:
    """
    Validate a configuration mapping

    Raises:
        ConfigError: naming the dotted key of the first problem
    """
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigError("top level must be a mapping")
    doc = _inline_files(doc, base or Path.cwd())
    try:
        return ExperimentConfig.model_validate(doc)
    except ValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(part) for part in first["loc"]) or None
        raise ConfigError(first["msg"], key=key) from e


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Load and validate a YAML experiment file

    Raises:
        ConfigError: missing file, YAML syntax error (with line) or invalid key
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        doc = yaml.safe_load(path.read_text())
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f"line {mark.line + 1}" if mark is not None else "unknown line"
        raise ConfigError(f"YAML syntax error at {where}: {getattr(e, 'problem', e)}") from e
    config = parse_config(doc, base=path.parent)
    logger.info(f"Loaded config {path}")
    return config
