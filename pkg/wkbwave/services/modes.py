"""
Mode service: projection of initial fields onto the WKB basis, time-domain
reconstruction and the discrete orthonormality / completeness checks
"""
import logging
import math
from typing import Optional

import numpy as np

from wkbwave.models.grids import AxisGrid, FrequencyGrid, FrequencyKind, SampledField
from wkbwave.models.media import MediumModel
from wkbwave.models.results import ModeFunction, PhaseTable
from wkbwave.services.media import f_and_derivative, f_values, invert_f
from wkbwave.services.wkb import psi_matrix

logger = logging.getLogger(__name__)


def natural_frequency_grid(model: MediumModel, table: PhaseTable,
                           omega_min: float, omega_max: float) -> FrequencyGrid:
    """
    Frequency grid uniform in f(omega) with df = 2 pi / U, U = u2(z_max) - u2(z_min)

    This is the spacing at which the windowed WKB modes are mutually orthogonal;
    cell widths are df / f'(omega_j).

    Args:
        model: Medium model
        table: Phase table of the z window
        omega_min: Lowest frequency (the first f sample is f(omega_min))
        omega_max: Upper bound, the last sample has f <= f(omega_max)
    """
    if not omega_max > omega_min:
        raise ValueError("omega_max must exceed omega_min")
    df = 2.0 * math.pi / table.u_extent
    f_lo, f_hi = float(f_values(model, omega_min)), float(f_values(model, omega_max))
    count = int(math.floor((f_hi - f_lo) / df * (1.0 + 1e-12))) + 1
    if count < 2:
        raise ValueError(f"[{omega_min}, {omega_max}] holds fewer than two natural frequency samples")
    omega = [omega_min] + [invert_f(model, f_lo + j * df) for j in range(1, count)]
    _, fp = f_and_derivative(model, np.asarray(omega))
    return FrequencyGrid(kind=FrequencyKind.NATURAL, omega=omega, widths=(df / np.asarray(fp)).tolist())


def frequency_grid(model: MediumModel, table: PhaseTable, kind: FrequencyKind,
                   omega_min: float, omega_max: float, n: Optional[int] = None) -> FrequencyGrid:
    if FrequencyKind(kind) == FrequencyKind.NATURAL:
        return natural_frequency_grid(model, table, omega_min, omega_max)
    if n is None:
        raise ValueError("uniform frequency grid needs n")
    return FrequencyGrid.uniform(omega_min, omega_max, n)


def windowed_plane_wave(grid: AxisGrid, k: float, amplitude: complex = 1.0) -> SampledField:
    """A exp(i k z) on the window (the taper is applied by project)"""
    return SampledField(grid=grid, values=amplitude * np.exp(1j * k * grid.z), label=f"plane(k={k:.17g})")


def gaussian_packet(grid: AxisGrid, sigma: float, z0: float = 0.0, k0: float = 0.0,
                    amplitude: complex = 1.0) -> SampledField:
    """A exp(-(z - z0)^2 / (2 sigma^2)) exp(i k0 (z - z0))"""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    s = grid.z - z0
    values = amplitude * np.exp(-s ** 2 / (2.0 * sigma ** 2)) * np.exp(1j * k0 * s)
    return SampledField(grid=grid, values=values, label=f"gaussian(sigma={sigma:.17g}, z0={z0:.17g}, k0={k0:.17g})")


def _same_grid(field: SampledField, table: PhaseTable) -> None:
    if field.grid != table.grid:
        raise ValueError("field and phase table live on different z grids")


def project(model: MediumModel, table: PhaseTable, omega_grid: FrequencyGrid,
            e0: SampledField) -> ModeFunction:
    """
    Mode function of an initial field

    c(omega) = sqrt(eps1(omega)) int sqrt(eps2(z)) psi_omega(z)^* E0(z) dz

    The z integral is the trapezoid rule on the table grid; E0 is multiplied by
    the grid taper first.

    Raises:
        NonMonotone: f' <= 0 at some omega sample
    """
    _same_grid(e0, table)
    grid = table.grid
    omega = omega_grid.points
    psi = psi_matrix(model, table, omega)
    weighted = grid.trapezoid_weights() * np.sqrt(np.asarray(model.eps2(grid.z))) \
        * grid.taper_weights() * np.asarray(e0.values)
    values = np.sqrt(np.asarray(model.eps1(omega))) * (psi.conj() @ weighted)
    logger.info(f"Projected '{e0.label}' onto {omega_grid.n} modes (taper {grid.taper.kind.value})")
    return ModeFunction(grid=omega_grid, values=values, source=e0.label)


def reconstruct(model: MediumModel, table: PhaseTable, c: ModeFunction, t: float) -> SampledField:
    """
    E(z, t) = int c(omega) exp(-i omega t) psi_omega(z) / sqrt(eps1(omega) eps2(z)) domega

    Trapezoid rule over the frequency grid of c.
    """
    omega = c.grid.points
    psi = psi_matrix(model, table, omega)
    weights = c.grid.trapezoid_weights() * c.values * np.exp(-1j * omega * t) \
        / np.sqrt(np.asarray(model.eps1(omega)))
    values = (weights @ psi) / np.sqrt(np.asarray(model.eps2(table.grid.z)))
    return SampledField(grid=table.grid, values=values, label=f"E(t={t:.17g}) from {c.source}")


def discrete_gram(model: MediumModel, table: PhaseTable, omega_grid: FrequencyGrid) -> np.ndarray:
    """
    G_jk = sqrt(domega_j domega_k) sum_i w_i psi_j(z_i)^* psi_k(z_i)

    w are the z trapezoid weights and domega the cell widths. The delta
    normalization of psi becomes the Kronecker delta under this scaling, so
    G is close to the identity on a natural grid.
    """
    psi = psi_matrix(model, table, omega_grid.points)
    scale = np.sqrt(omega_grid.cell_widths)
    scaled = psi * scale[:, None]
    return (scaled.conj() * table.grid.trapezoid_weights()[None, :]) @ scaled.T


def completeness_residual(model: MediumModel, table: PhaseTable, omega_grid: FrequencyGrid,
                          test_field: SampledField) -> float:
    """
    Relative L2 error of expanding phi = sqrt(eps2) test_field in the discrete WKB basis

    ||sum_j w_j <psi_j, phi> psi_j - phi|| / ||phi|| with the same quadratures as
    project / reconstruct (no taper). test_field should be band-limited inside
    the frequency grid; energy outside it shows up in the residual.
    """
    _same_grid(test_field, table)
    weights_z = table.grid.trapezoid_weights()
    phi = np.sqrt(np.asarray(model.eps2(table.grid.z))) * np.asarray(test_field.values)
    norm = math.sqrt(float(np.sum(weights_z * np.abs(phi) ** 2)))
    if norm == 0.0:
        return 0.0
    psi = psi_matrix(model, table, omega_grid.points)
    coefficients = psi.conj() @ (weights_z * phi)
    expanded = (omega_grid.trapezoid_weights() * coefficients) @ psi
    return math.sqrt(float(np.sum(weights_z * np.abs(expanded - phi) ** 2))) / norm


def reduced_mode_function(model: MediumModel, c: ModeFunction) -> np.ndarray:
    """c(omega) / sqrt(eps1(omega) f'(omega)): depends on omega only through f in homogeneous media"""
    omega = c.grid.points
    _, fp = f_and_derivative(model, omega)
    return c.values / np.sqrt(np.asarray(model.eps1(omega)) * np.asarray(fp))


def mode_energy_fraction(model: MediumModel, c: ModeFunction, center: float, radius: float) -> float:
    """
    Fraction of sum |c|^2 w outside the peak |f(omega) - f(center)| <= radius

    Returns 0 for an all-zero mode function.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    omega = c.grid.points
    energy = c.grid.trapezoid_weights() * np.abs(c.values) ** 2
    total = float(np.sum(energy))
    if total == 0.0:
        return 0.0
    f = np.asarray(f_values(model, omega))
    outside = np.abs(f - float(f_values(model, center))) > radius
    return float(np.sum(energy[outside])) / total