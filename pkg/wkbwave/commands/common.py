"""
Steps shared by the commands: monotonicity gate, grids and common outputs
"""
import logging
from pathlib import Path
from typing import List, Optional, Tuple

import pandas as pd

from wkbwave.config import settings
from wkbwave.models.grids import FrequencyGrid
from wkbwave.models.media import MediumModel
from wkbwave.models.results import PhaseTable, ValidityReport
from wkbwave.schemas.experiment import ExperimentConfig, OmegaGridConfig
from wkbwave.services.media import MonotoneCheck, validate_monotone
from wkbwave.services.modes import frequency_grid
from wkbwave.services.wkb import validity_functional
from wkbwave.utils.helpers import write_csv, write_text

logger = logging.getLogger(__name__)


def gate_window(model: MediumModel, omega_grid: Optional[OmegaGridConfig]) -> Optional[Tuple[float, float]]:
    """Interval checked by the monotonicity gate: declared window, else the frequency grid span"""
    if model.window.bounded:
        return (model.window.omega_min, model.window.omega_max)
    if omega_grid is not None:
        return (omega_grid.omega_min, omega_grid.omega_max)
    return None


def monotone_gate(model: MediumModel, omega_grid: Optional[OmegaGridConfig]) -> Optional[MonotoneCheck]:
    """
    Refuse dispersion laws with f' <= 0 before any computation

    Raises:
        NonMonotone: first failing frequency
    """
    window = gate_window(model, omega_grid)
    if window is None:
        logger.info("Unbounded window and no frequency grid: monotonicity gate skipped")
        return None
    check = validate_monotone(model, window, samples=settings.monotone_samples)
    check.raise_for_failure()
    return check


def build_frequency_grid(model: MediumModel, table: PhaseTable, grid_config: OmegaGridConfig) -> FrequencyGrid:
    return frequency_grid(model, table, grid_config.kind, grid_config.omega_min,
                          grid_config.omega_max, grid_config.n)


def write_resolved_config(config: ExperimentConfig, out: Path) -> Path:
    return write_text(out / "resolved_config.yaml", config.to_resolved_yaml())


def write_validity(config: ExperimentConfig, out: Path) -> Tuple[ValidityReport, List[Path]]:
    """Validity report of the configured medium; validity.csv only when output.write_validity"""
    model, grid = config.medium, config.zgrid
    report = validity_functional(model, grid)
    if not config.output.write_validity:
        return report, []
    path = write_csv(out / "validity.csv", pd.DataFrame({"z": grid.z, "lhs": report.lhs}))
    return report, [path]


def written(paths: List[Path]) -> List[Path]:
    for path in paths:
        logger.info(f"Wrote {path}")
    return paths
