"""
Helper utility functions
"""
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from wkbwave.config import settings
from wkbwave.models.grids import SampledField


def _atomic_write(path: Path, writer) -> Path:
    """Write through a temporary file in the target directory, then rename"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            writer(handle)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_csv(path: Path, frame: pd.DataFrame) -> Path:
    """CSV with a one-line header and fixed float formatting"""
    return _atomic_write(
        path,
        lambda handle: frame.to_csv(handle, index=False, float_format=settings.csv_float_format,
                                    lineterminator="\n"),
    )


def write_json(path: Path, payload: Dict[str, Any]) -> Path:
    return _atomic_write(path, lambda handle: handle.write(json.dumps(payload, indent=2, sort_keys=True) + "\n"))


def write_text(path: Path, text: str) -> Path:
    return _atomic_write(path, lambda handle: handle.write(text))


def field_frame(field: SampledField, re: str = "re", im: str = "im") -> pd.DataFrame:
    """Columns z, re, im of a field on a z grid"""
    return pd.DataFrame({
        "z": field.points,
        re: np.real(field.values),
        im: np.imag(field.values),
    })


def time_tag(t: float) -> str:
    """Filename-safe time label: 10 -> '10', 2.5 -> '2.5', -1 -> 'm1'"""
    text = f"{t:.12g}"
    return text.replace("-", "m").replace("+", "")


def centroid(field: SampledField, weights: Optional[np.ndarray] = None) -> float:
    """Intensity centroid sum z |E|^2 w / sum |E|^2 w"""
    w = field.grid.trapezoid_weights() if weights is None else weights
    intensity = w * np.abs(field.values) ** 2
    total = float(np.sum(intensity))
    if total == 0.0:
        raise ValueError("centroid of a zero field")
    return float(np.sum(field.points * intensity) / total)


def relative_l2(field: SampledField, reference: SampledField) -> float:
    """||field - reference|| / ||reference|| with trapezoid weights"""
    if field.grid != reference.grid:
        raise ValueError("fields live on different grids")
    ref = reference.norm()
    diff = field.with_values(field.values - reference.values).norm()
    if ref == 0.0:
        return 0.0 if diff == 0.0 else float("inf")
    return diff / ref
