"""
eigen: lowest eigenpairs of h2 with mapped frequencies and WKB validity margins
"""
import logging
from pathlib import Path
from typing import List

import numpy as np
import pandas as pd

from wkbwave.commands.common import monotone_gate, write_resolved_config, write_validity, written
from wkbwave.exceptions import ConfigError
from wkbwave.schemas.experiment import ExperimentConfig
from wkbwave.services.spectral import discretize_h2, eigensolve, eigensolve_interval
from wkbwave.utils.helpers import field_frame, write_csv

logger = logging.getLogger(__name__)


def run(config: ExperimentConfig, out: Path) -> List[Path]:
    """
    Writes eigenvalues.csv (index, lambda, omega, validity_margin),
    eigvec_<i>.csv (z, re, im), validity.csv and resolved_config.yaml
    """
    config.require("medium", "zgrid")
    model, grid = config.medium, config.zgrid
    monotone_gate(model, config.omega_grid)

    op = discretize_h2(model, grid, config.boundary)
    interval = config.eigen.interval
    if interval is None:
        if config.eigen.k > op.size:
            raise ConfigError(f"{config.eigen.k} exceeds the number of unknowns ({op.size})", key="eigen.k")
        pairs = eigensolve(op, config.eigen.k, model=model)
    else:
        pairs = eigensolve_interval(op, interval[0], interval[1], model=model)

    report, validity_paths = write_validity(config, out)
    omega = np.array([p.omega for p in pairs], dtype=float)
    table = pd.DataFrame({
        "index": np.arange(len(pairs)),
        "lambda": [p.lam for p in pairs],
        "omega": omega,
        "validity_margin": report.margins(omega),
    })
    paths = [write_csv(out / "eigenvalues.csv", table)] + validity_paths
    if config.eigen.write_vectors:
        for i, pair in enumerate(pairs):
            paths.append(write_csv(out / f"eigvec_{i}.csv", field_frame(pair.vector)))
    paths.append(write_resolved_config(config, out))
    logger.info(f"eigen: {len(pairs)} pairs, lambda in [{table['lambda'].min():.6g}, {table['lambda'].max():.6g}]")
    return written(paths)
