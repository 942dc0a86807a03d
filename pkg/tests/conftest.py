"""
Shared fixtures: media, grids and a config writer
"""
from pathlib import Path

import numpy as np
import pandas as pd
import pytest
import yaml

from wkbwave.models import AxisGrid, DispersionFactor, FrequencyWindow, MediumModel, ProfileFactor, lorentzian_medium


@pytest.fixture
def vacuum() -> MediumModel:
    return MediumModel()


@pytest.fixture
def dispersive() -> MediumModel:
    """eps1 = 1 + omega^2, homogeneous background"""
    return MediumModel(eps1=DispersionFactor(kind="cauchy", A=1.0, B=1.0))


@pytest.fixture
def lorentzian() -> MediumModel:
    return lorentzian_medium(a=0.2, gamma=5.0)


@pytest.fixture
def slab_grid() -> AxisGrid:
    return AxisGrid(z_min=-100.0, z_max=100.0, n=2001)


def dip_samples():
    """eps1 = n1^2 with n1 = 1 - 0.5 exp(-((omega - 2)/0.2)^2) on [0, 4]"""
    omega = np.linspace(0.0, 4.0, 401)
    n1 = 1.0 - 0.5 * np.exp(-((omega - 2.0) / 0.2) ** 2)
    return omega, n1 ** 2


@pytest.fixture
def nonmonotone() -> MediumModel:
    omega, eps = dip_samples()
    return MediumModel(
        eps1=DispersionFactor(kind="tabulated", omega_samples=omega.tolist(), samples=eps.tolist()),
        window=FrequencyWindow(omega_min=0.1, omega_max=4.0),
    )


@pytest.fixture
def dip_csv(tmp_path) -> Path:
    omega, eps = dip_samples()
    path = tmp_path / "eps1_dip.csv"
    pd.DataFrame({"omega": omega, "value": eps}).to_csv(path, index=False)
    return path


@pytest.fixture
def write_config(tmp_path):
    """Dump a mapping to <tmp_path>/<name>.yaml and return the path"""
    def _write(doc, name: str = "experiment") -> Path:
        path = tmp_path / f"{name}.yaml"
        path.write_text(yaml.safe_dump(doc, sort_keys=False))
        return path
    return _write


def tabulated_profile(fn, z_min: float, z_max: float, n: int) -> ProfileFactor:
    z = np.linspace(z_min, z_max, n)
    return ProfileFactor(kind="tabulated", z_samples=z.tolist(), samples=fn(z).tolist())
