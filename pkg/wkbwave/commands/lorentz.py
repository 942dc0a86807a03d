"""
lorentz: first-order mode function of a Lorentzian inhomogeneity against its
finite-difference realization
"""
import logging
from pathlib import Path
from typing import List

import numpy as np
import pandas as pd

from wkbwave.commands.common import build_frequency_grid, monotone_gate, write_resolved_config, written
from wkbwave.schemas.experiment import ExperimentConfig
from wkbwave.services.perturb import (
    analytic_bracket,
    default_exclusion_radius,
    fit_decay_rate,
    numeric_bracket,
    numeric_mode_derivative,
    resonance_mask,
    resonance_peak,
    wavenumber,
)
from wkbwave.services.wkb import build_phase_table
from wkbwave.utils.helpers import write_csv, write_json

logger = logging.getLogger(__name__)


def run(config: ExperimentConfig, out: Path) -> List[Path]:
    """
    Writes bracket_analytic.csv and bracket_numeric.csv on one frequency grid
    (samples inside the exclusion radius flagged), fit.json and resolved_config.yaml
    """
    config.require("lorentz", "zgrid", "omega_grid")
    case = config.lorentz_case()
    grid = config.zgrid
    background = case.background()
    monotone_gate(background, config.omega_grid)

    omega_grid = build_frequency_grid(background, build_phase_table(background, grid), config.omega_grid)
    omega = omega_grid.points
    radius = config.lorentz.exclusion_radius or default_exclusion_radius(case, grid.length)
    excluded = resonance_mask(case, omega_grid, radius)
    omega_star, peak_weight = resonance_peak(case)

    big_k = np.asarray(wavenumber(case, omega), dtype=float)
    analytic = pd.DataFrame({
        "omega": omega,
        "K": big_k,
        "detuning": case.k - big_k,
        "bracket": np.where(excluded, np.nan, analytic_bracket(case, omega)),
        "excluded": excluded.astype(int),
    })

    derivative = numeric_mode_derivative(case, omega_grid, grid, config.lorentz.a_steps)
    numeric_values = numeric_bracket(case, derivative)
    numeric = pd.DataFrame({
        "omega": omega,
        "re": np.real(numeric_values),
        "im": np.imag(numeric_values),
        "abs": np.abs(numeric_values),
        "excluded": excluded.astype(int),
    })

    fit = fit_decay_rate(case, derivative, tuple(config.lorentz.fit_window))
    summary = {
        "decay_rate": fit.rate,
        "expected_rate": fit.expected_rate,
        "rate_error": fit.rate_error,
        "intercept": fit.intercept,
        "fit_samples": fit.samples,
        "fit_window": config.lorentz.fit_window,
        "max_relative_deviation": fit.max_relative_deviation,
        "relative_deviation": [{"omega": w, "deviation": d} for w, d in zip(fit.omega, fit.relative_deviation)],
        "omega_star": omega_star,
        "peak_weight": peak_weight,
        "exclusion_radius": radius,
        "excluded_samples": int(np.sum(excluded)),
        "a_steps": config.lorentz.a_steps,
    }
    paths = [
        write_csv(out / "bracket_analytic.csv", analytic),
        write_csv(out / "bracket_numeric.csv", numeric),
        write_json(out / "fit.json", summary),
        write_resolved_config(config, out),
    ]
    logger.info(f"lorentz: decay rate {fit.rate:.6g} vs gamma {case.gamma:.6g}, omega* = {omega_star:.6g}")
    return written(paths)
