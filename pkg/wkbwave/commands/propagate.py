"""
propagate: time evolution of an initial field by WKB mode superposition or
by the spectral non-dispersive solver
"""
import logging
from pathlib import Path
from typing import List

import numpy as np
import pandas as pd

from wkbwave.commands.common import (
    build_frequency_grid,
    monotone_gate,
    write_resolved_config,
    write_validity,
    written,
)
from wkbwave.config import settings
from wkbwave.exceptions import ConfigError
from wkbwave.models.grids import FrequencyGrid, SampledField
from wkbwave.models.media import MediumModel
from wkbwave.models.results import ModeFunction, PhaseTable, ValidityReport
from wkbwave.schemas.experiment import Direction, ExperimentConfig, Method
from wkbwave.services.modes import completeness_residual, project, reconstruct
from wkbwave.services.spectral import NondispersivePropagator
from wkbwave.services.wkb import build_phase_table
from wkbwave.utils.helpers import field_frame, time_tag, write_csv, write_text

logger = logging.getLogger(__name__)


def margin_warnings(report: ValidityReport, c: ModeFunction) -> List[str]:
    """Modes carrying non-negligible weight where the WKB margin is below the threshold"""
    magnitude = np.abs(c.values)
    peak = float(np.max(magnitude)) if magnitude.size else 0.0
    if peak == 0.0:
        return []
    margins = report.margins(c.grid.points)
    lines = []
    for omega, mag, margin in zip(c.grid.points, magnitude, margins):
        if margin < settings.validity_warning_margin and mag > settings.mode_weight_threshold * peak:
            lines.append(f"omega={omega:.17g} |c|={mag:.17g} margin={margin:.17g}")
    if lines:
        logger.warning(f"{len(lines)} weighted mode(s) below WKB margin {settings.validity_warning_margin:g}")
    return lines


def completeness_warnings(model: MediumModel, table: PhaseTable, omega_grid: FrequencyGrid,
                          e0: SampledField) -> List[str]:
    """Initial field not representable on the frequency grid (e.g. a real field on omega >= 0 only)"""
    residual = completeness_residual(model, table, omega_grid, e0)
    if residual <= settings.completeness_warning:
        return []
    logger.warning(f"Initial field has completeness residual {residual:.3e} on "
                   f"[{omega_grid.omega_min:.6g}, {omega_grid.omega_max:.6g}]")
    return [f"completeness_residual={residual:.17g} omega_min={omega_grid.omega_min:.17g} "
            f"omega_max={omega_grid.omega_max:.17g}"]


def initial_rate(config: ExperimentConfig, e0: SampledField) -> SampledField:
    """dE/dt at t = 0 from the configured propagation direction"""
    direction = config.initial_field.direction
    if direction == Direction.STANDING:
        return e0.with_values(np.zeros_like(e0.values), label="dE/dt(0)")
    model, grid = config.medium, config.zgrid
    v2 = 1.0 / np.sqrt(np.asarray(model.eps2(grid.z)) * np.asarray(model.mu2(grid.z)))
    slope = np.gradient(e0.values, grid.dz, edge_order=2)
    sign = -1.0 if direction == Direction.RIGHT else 1.0
    return e0.with_values(sign * v2 * slope, label="dE/dt(0)")


def _fields_wkb(config: ExperimentConfig, e0: SampledField, report: ValidityReport, out: Path) -> List[Path]:
    config.require("omega_grid")
    model, grid = config.medium, config.zgrid
    table = build_phase_table(model, grid)
    omega_grid = build_frequency_grid(model, table, config.omega_grid)
    c = project(model, table, omega_grid, e0)
    modes = pd.DataFrame({
        "omega": omega_grid.points,
        "re_c": np.real(c.values),
        "im_c": np.imag(c.values),
        "abs_c": np.abs(c.values),
    })
    paths = [write_csv(out / "modes.csv", modes)]
    for t in config.times:
        field = reconstruct(model, table, c, t)
        paths.append(write_csv(out / f"field_t{time_tag(t)}.csv", field_frame(field, "re_E", "im_E")))
    warnings = margin_warnings(report, c) + completeness_warnings(model, table, omega_grid, e0)
    paths.append(write_text(out / "warnings.txt", "".join(line + "\n" for line in warnings)))
    return paths


def _fields_spectral(config: ExperimentConfig, e0: SampledField, out: Path) -> List[Path]:
    model, grid = config.medium, config.zgrid
    if not model.nondispersive:
        raise ConfigError("spectral method needs eps1 = mu1 = 1", key="method")
    propagator = NondispersivePropagator(model, grid, config.boundary, e0, initial_rate(config, e0))
    energy0 = propagator.modal_energy(0.0)
    paths = []
    for t in config.times:
        field = propagator.field(t)
        paths.append(write_csv(out / f"field_t{time_tag(t)}.csv", field_frame(field, "re_E", "im_E")))
        drift = abs(propagator.modal_energy(t) - energy0) / energy0 if energy0 else 0.0
        logger.info(f"t={t:g}: modal energy drift {drift:.3e}")
    paths.append(write_text(out / "warnings.txt", ""))
    return paths


def run(config: ExperimentConfig, out: Path) -> List[Path]:
    """
    Writes field_t<t>.csv (z, re_E, im_E) per time, modes.csv for
    method=wkb, validity.csv, warnings.txt and resolved_config.yaml
    """
    config.require("medium", "zgrid", "initial_field")
    model, grid = config.medium, config.zgrid
    monotone_gate(model, config.omega_grid)

    e0 = config.initial_field.sample(grid)
    report, validity_paths = write_validity(config, out)
    if config.method == Method.WKB:
        paths = _fields_wkb(config, e0, report, out)
    else:
        paths = _fields_spectral(config, e0, out)
    paths += validity_paths + [write_resolved_config(config, out)]
    logger.info(f"propagate ({config.method.value}): {len(config.times)} time(s)")
    return written(paths)
