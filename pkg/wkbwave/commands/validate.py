"""
validate: monotonicity gate, phase table and WKB validity profile
"""
import logging
from pathlib import Path
from typing import List, Optional

from wkbwave.commands.common import gate_window, write_resolved_config, write_validity, written
from wkbwave.config import settings
from wkbwave.schemas.experiment import ExperimentConfig, OmegaGridConfig
from wkbwave.services.media import validate_monotone
from wkbwave.services.wkb import build_phase_table
from wkbwave.utils.helpers import write_json

logger = logging.getLogger(__name__)


def lowest_frequency(omega_grid: Optional[OmegaGridConfig]) -> Optional[float]:
    """Smallest |omega| of the grid interval, where the WKB margin is tightest"""
    if omega_grid is None:
        return None
    if omega_grid.omega_min <= 0.0 <= omega_grid.omega_max:
        return 0.0
    return min(abs(omega_grid.omega_min), abs(omega_grid.omega_max))


def run(config: ExperimentConfig, out: Path) -> List[Path]:
    """
    Writes validate.json (monotone, omega_fail, max_lhs, margin, u_extent),
    validity.csv and resolved_config.yaml. A failed gate still writes
    validate.json before raising NonMonotone.
    """
    config.require("medium", "zgrid")
    model, grid = config.medium, config.zgrid
    paths = [write_resolved_config(config, out)]

    summary = {"monotone": True, "omega_fail": None, "window": None}
    window = gate_window(model, config.omega_grid)
    if window is not None:
        check = validate_monotone(model, window, samples=settings.monotone_samples)
        summary.update(monotone=check.ok, omega_fail=check.omega_fail, window=list(window))
        if not check.ok:
            paths.append(write_json(out / "validate.json", summary))
            written(paths)
            check.raise_for_failure()

    table = build_phase_table(model, grid)
    report, validity_paths = write_validity(config, out)
    omega_ref = lowest_frequency(config.omega_grid)
    summary.update(
        max_lhs=report.max_lhs,
        u_extent=table.u_extent,
        margin_omega=omega_ref,
        margin=report.margin_at(omega_ref) if omega_ref is not None else None,
    )
    paths += validity_paths + [write_json(out / "validate.json", summary)]
    return written(paths)
