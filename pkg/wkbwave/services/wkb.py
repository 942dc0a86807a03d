"""
WKB service: phase tables v2/u2, WKB eigenfunctions, time-harmonic fields
and the pointwise validity functional
"""
import logging
import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.integrate import simpson

from wkbwave.exceptions import DerivativeUnavailable, GridTooCoarse
from wkbwave.models.grids import AxisGrid, SampledField
from wkbwave.models.media import MediumModel, ProfileFactor, ProfileKind
from wkbwave.models.results import PhaseTable, ValidityReport
from wkbwave.services.media import f_and_derivative, invert_f

logger = logging.getLogger(__name__)

QUADRATURE_RTOL = 1e-8
MIN_KNOTS_PER_TAPER = 16


def _slowness(model: MediumModel, z) -> np.ndarray:
    """1 / v2(z) = sqrt(eps2 mu2)"""
    return np.sqrt(np.asarray(model.eps2(z)) * np.asarray(model.mu2(z)))


def _simpson_segment(model: MediumModel, a: float, b: float, intervals: int) -> float:
    """Signed composite Simpson integral of 1/v2 from a to b"""
    if a == b:
        return 0.0
    intervals += intervals % 2
    x = np.linspace(a, b, intervals + 1)
    return float(simpson(_slowness(model, x), dx=(b - a) / intervals))


def _cumulative_phase(model: MediumModel, grid: AxisGrid, factor: int) -> np.ndarray:
    """
    u2 on the grid from composite Simpson on a `factor`-refined grid

    Each coarse interval is integrated with `factor` (even) subintervals;
    the lower limit is fixed at z = 0.
    """
    fine = grid.refined(factor)
    g = _slowness(model, fine.z)
    blocks = sliding_window_view(g, factor + 1)[::factor]
    steps = simpson(blocks, dx=fine.dz, axis=1)
    cumulative = np.concatenate([[0.0], np.cumsum(steps)])

    z = grid.z
    if grid.z_min <= 0.0 <= grid.z_max:
        i = int(np.argmin(np.abs(z)))
        if z[i] == 0.0:
            offset = cumulative[i]
        else:
            offset = cumulative[i] + _simpson_segment(model, z[i], 0.0, factor)
    else:
        # integrate from 0 out to the window
        intervals = max(factor, int(math.ceil(abs(grid.z_min) / fine.dz)))
        offset = -_simpson_segment(model, 0.0, grid.z_min, intervals)
    return cumulative - offset


def build_phase_table(model: MediumModel, grid: AxisGrid) -> PhaseTable:
    """
    Tabulate v2(z) = 1/sqrt(eps2 mu2) and u2(z) = int_0^z dz'/v2

    Args:
        model: Medium model (only eps2, mu2 are used)
        grid: z grid

    Returns:
        PhaseTable with u2(0) = 0

    Raises:
        GridTooCoarse: 2x- and 4x-refined Simpson disagree beyond 1e-8 (relative)
    """
    u_coarse = _cumulative_phase(model, grid, 2)
    u_fine = _cumulative_phase(model, grid, 4)
    scale = max(float(np.max(np.abs(u_fine))), grid.dz)
    deviation = float(np.max(np.abs(u_fine - u_coarse))) / scale
    if deviation > QUADRATURE_RTOL:
        raise GridTooCoarse(
            f"u2 quadrature not converged on {grid.n} points (relative deviation {deviation:.3e})"
        )

    z = grid.z
    origin = int(np.argmin(np.abs(z))) if grid.z_min <= 0.0 <= grid.z_max else None
    if origin is not None and z[origin] == 0.0:
        u_fine[origin] = 0.0
    v2 = 1.0 / _slowness(model, z)
    logger.info(f"Phase table built on {grid.n} points, u2 in [{u_fine[0]:.6g}, {u_fine[-1]:.6g}]")
    return PhaseTable(grid=grid, v2=v2, u2=u_fine, origin_index=origin)


def psi_matrix(model: MediumModel, table: PhaseTable, omegas) -> np.ndarray:
    """WKB eigenfunctions for several frequencies, shape (len(omegas), n_z)"""
    w = np.atleast_1d(np.asarray(omegas, dtype=float))
    f, fp = f_and_derivative(model, w)
    f = np.atleast_1d(f)[:, None]
    fp = np.atleast_1d(fp)[:, None]
    amplitude = np.sqrt(fp / (2.0 * math.pi * table.v2[None, :]))
    return amplitude * np.exp(1j * f * table.u2[None, :])


def psi_wkb(model: MediumModel, table: PhaseTable, omega: float) -> SampledField:
    """
    Delta-normalized WKB eigenfunction of h

    psi(z) = sqrt(f'(omega) / (2 pi v2(z))) exp(i f(omega) u2(z))

    Raises:
        NonMonotone: f'(omega) <= 0
    """
    values = psi_matrix(model, table, [omega])[0]
    return SampledField(grid=table.grid, values=values, label=f"psi_wkb(omega={omega:.17g})")


def e_field_wkb(model: MediumModel, table: PhaseTable, omega: float, t: float) -> SampledField:
    """Time-harmonic WKB field exp(-i omega t) psi(z) / sqrt(eps1(omega) eps2(z))"""
    psi = psi_matrix(model, table, [omega])[0]
    eps = float(model.eps1(omega)) * np.asarray(model.eps2(table.grid.z))
    values = np.exp(-1j * omega * t) * psi / np.sqrt(eps)
    return SampledField(grid=table.grid, values=values, label=f"E_wkb(omega={omega:.17g}, t={t:.17g})")


def wkb_standing_wave(model: MediumModel, table: PhaseTable, omega: float) -> SampledField:
    """
    Real combination of the +omega and -omega WKB waves vanishing at z_min:
    sqrt(f'/(2 pi v2)) sin(f(omega) (u2(z) - u2(z_min)))
    """
    f, fp = f_and_derivative(model, omega)
    values = np.sqrt(fp / (2.0 * math.pi * table.v2)) * np.sin(f * (table.u2 - table.u2[0]))
    return SampledField(grid=table.grid, values=values, label=f"standing_wkb(omega={omega:.17g})")


def wkb_quantized_omega(model: MediumModel, table: PhaseTable, m: int) -> float:
    """WKB estimate of the m-th hard-wall eigenfrequency: f(omega) U = m pi"""
    if m < 1:
        raise ValueError("mode number must be >= 1")
    return invert_f(model, m * math.pi / table.u_extent)


def phase_gradient(field: SampledField) -> np.ndarray:
    """d(arg field)/dz from the unwrapped phase"""
    phase = np.unwrap(np.angle(field.values))
    return np.gradient(phase, field.grid.points)


def _require_derivatives(profile: ProfileFactor, name: str, grid: AxisGrid) -> None:
    if profile.kind != ProfileKind.TABULATED:
        return
    needed = grid.taper_length / MIN_KNOTS_PER_TAPER
    if profile.knot_spacing > needed:
        raise DerivativeUnavailable(
            f"{name} knot spacing {profile.knot_spacing:.4g} exceeds {needed:.4g} "
            f"({MIN_KNOTS_PER_TAPER} knots per taper length)"
        )


def validity_functional(model: MediumModel, grid: AxisGrid) -> ValidityReport:
    """
    Left side of the WKB validity condition at every grid point

    lhs = (v2^2/2) |(2 v2 v2'' - v2'^2)/(2 v2^2) + (2 mu2 mu2'' - 3 mu2'^2)/(2 mu2^2)|

    Raises:
        DerivativeUnavailable: tabulated profile too coarse for second derivatives
    """
    _require_derivatives(model.eps2, "eps2", grid)
    _require_derivatives(model.mu2, "mu2", grid)

    z = grid.z
    e, de, dde = (np.asarray(model.eps2(z)), np.asarray(model.eps2.derivative(z)),
                  np.asarray(model.eps2.second_derivative(z)))
    m, dm, ddm = (np.asarray(model.mu2(z)), np.asarray(model.mu2.derivative(z)),
                  np.asarray(model.mu2.second_derivative(z)))

    p = e * m
    dp = de * m + e * dm
    ddp = dde * m + 2.0 * de * dm + e * ddm
    v = p ** -0.5
    dv = -0.5 * p ** -1.5 * dp
    ddv = 0.75 * p ** -2.5 * dp ** 2 - 0.5 * p ** -1.5 * ddp

    bracket = (2.0 * v * ddv - dv ** 2) / (2.0 * v ** 2) + (2.0 * m * ddm - 3.0 * dm ** 2) / (2.0 * m ** 2)
    lhs = 0.5 * v ** 2 * np.abs(bracket)
    return ValidityReport(grid=grid, lhs=lhs)
