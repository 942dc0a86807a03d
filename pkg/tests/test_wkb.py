"""
Tests for phase tables, WKB eigenfunctions and the validity functional
"""
import math

import numpy as np
import pytest
from scipy.integrate import quad

from wkbwave.exceptions import DerivativeUnavailable, GridTooCoarse
from wkbwave.models import AxisGrid, DispersionFactor, MediumModel, ProfileFactor, Taper, lorentzian_medium
from wkbwave.services.media import f_and_derivative
from wkbwave.services.perturb import plane_wave_constants
from wkbwave.services.spectral import apply_h2, discretize_h2
from wkbwave.services.wkb import (
    build_phase_table,
    e_field_wkb,
    phase_gradient,
    psi_wkb,
    validity_functional,
    wkb_quantized_omega,
    wkb_standing_wave,
)
from tests.conftest import tabulated_profile


def test_vacuum_phase_is_z(vacuum):
    grid = AxisGrid(z_min=-10.0, z_max=10.0, n=201)
    table = build_phase_table(vacuum, grid)
    np.testing.assert_allclose(table.v2, 1.0)
    np.testing.assert_allclose(table.u2, grid.z, atol=1e-12)
    assert table.origin_index == 100
    assert table.u2[100] == 0.0
    assert table.u_extent == pytest.approx(20.0, rel=1e-14)


def test_lorentzian_phase_matches_adaptive_quadrature(lorentzian):
    grid = AxisGrid(z_min=-30.0, z_max=30.0, n=601)
    table = build_phase_table(lorentzian, grid)

    def slowness(z):
        return math.sqrt(1.0 + 0.2 / (1.0 + (z / 5.0) ** 2))

    for i in (0, 150, 290, 301, 450, 600):
        expected, _ = quad(slowness, 0.0, grid.z[i], epsabs=1e-13, epsrel=1e-13)
        assert table.u2[i] == pytest.approx(expected, rel=1e-8, abs=1e-12)


def test_phase_origin_off_grid(lorentzian):
    grid = AxisGrid(z_min=5.0, z_max=15.0, n=101)
    table = build_phase_table(lorentzian, grid)
    expected, _ = quad(lambda z: math.sqrt(1.0 + 0.2 / (1.0 + (z / 5.0) ** 2)), 0.0, 5.0, epsrel=1e-13)
    assert table.origin_index is None
    assert table.u2[0] == pytest.approx(expected, rel=1e-8)


def test_coarse_grid_is_rejected():
    model = lorentzian_medium(a=5.0, gamma=0.05)
    with pytest.raises(GridTooCoarse):
        build_phase_table(model, AxisGrid(z_min=-10.0, z_max=10.0, n=5))


@pytest.mark.parametrize("omega", [0.5, 1.0, 2.0])
def test_homogeneous_wkb_field_is_a_plane_wave(omega):
    model = MediumModel(
        eps1=DispersionFactor(kind="cauchy", A=1.0, B=1.0),
        eps2=ProfileFactor.constant(2.0),
        mu2=ProfileFactor.constant(1.5),
    )
    grid = AxisGrid(z_min=-10.0, z_max=10.0, n=201)
    table = build_phase_table(model, grid)
    amplitude, k = plane_wave_constants(model, omega)
    for t in (0.0, 1.0, 7.0):
        field = e_field_wkb(model, table, omega, t)
        exact = amplitude * np.exp(1j * (k * grid.z - omega * t))
        error = np.max(np.abs(field.values - exact) / np.abs(exact))
        assert error <= 1e-12


def test_psi_normalization_factor(dispersive, slab_grid):
    table = build_phase_table(dispersive, slab_grid)
    psi = psi_wkb(dispersive, table, 1.5)
    _, fp = f_and_derivative(dispersive, 1.5)
    np.testing.assert_allclose(np.abs(psi.values), math.sqrt(fp / (2 * math.pi)), rtol=1e-14)


def test_phase_gradient_follows_local_wavenumber(lorentzian):
    grid = AxisGrid(z_min=-30.0, z_max=30.0, n=6001)
    table = build_phase_table(lorentzian, grid)
    omega = 3.0
    gradient = phase_gradient(psi_wkb(lorentzian, table, omega))
    expected = omega / table.v2
    np.testing.assert_allclose(gradient[1:-1], expected[1:-1], rtol=1e-4)


def test_standing_wave_vanishes_at_both_walls_when_quantized(lorentzian):
    grid = AxisGrid(z_min=-50.0, z_max=50.0, n=2001)
    table = build_phase_table(lorentzian, grid)
    omega = wkb_quantized_omega(lorentzian, table, 40)
    wave = wkb_standing_wave(lorentzian, table, omega)
    peak = np.max(np.abs(wave.values))
    assert abs(wave.values[0]) == 0.0
    assert abs(wave.values[-1]) < 1e-8 * peak


def test_quantized_frequencies_vacuum(vacuum):
    table = build_phase_table(vacuum, AxisGrid(z_min=0.0, z_max=100.0, n=1001))
    for m in (1, 5, 50):
        assert wkb_quantized_omega(vacuum, table, m) == pytest.approx(m * math.pi / 100.0, rel=1e-12)
    with pytest.raises(ValueError):
        wkb_quantized_omega(vacuum, table, 0)


def test_validity_vanishes_in_homogeneous_media(dispersive, slab_grid):
    report = validity_functional(dispersive, slab_grid)
    assert report.max_lhs == 0.0
    assert report.margin_at(1.0) == math.inf
    assert not report.violations(1.0).any()


def test_validity_matches_finite_differences(lorentzian):
    grid = AxisGrid(z_min=-20.0, z_max=20.0, n=4001)
    report = validity_functional(lorentzian, grid)

    v = 1.0 / np.sqrt(lorentzian.eps2(grid.z))
    dv = np.gradient(v, grid.dz, edge_order=2)
    ddv = np.gradient(dv, grid.dz, edge_order=2)
    lhs = 0.5 * v ** 2 * np.abs((2 * v * ddv - dv ** 2) / (2 * v ** 2))
    interior = slice(10, -10)
    np.testing.assert_allclose(report.lhs[interior], lhs[interior], rtol=1e-3, atol=1e-6)
    assert report.margin_at(5.0) == pytest.approx(25.0 / report.max_lhs)
    assert report.margin_at(5.0) > 100.0


def test_validity_flags_low_frequencies(lorentzian, slab_grid):
    report = validity_functional(lorentzian, slab_grid)
    assert report.violations(0.01).any()
    assert not report.violations(5.0).any()


def test_tabulated_profile_too_coarse_for_second_derivatives():
    eps2 = tabulated_profile(lambda z: 1.0 + 0.1 * np.exp(-z ** 2 / 50.0), -50.0, 50.0, 51)
    model = MediumModel(eps2=eps2)
    grid = AxisGrid(z_min=-50.0, z_max=50.0, n=1001, taper=Taper(kind="cosine", fraction=0.1))
    with pytest.raises(DerivativeUnavailable):
        validity_functional(model, grid)

    fine = tabulated_profile(lambda z: 1.0 + 0.1 * np.exp(-z ** 2 / 50.0), -50.0, 50.0, 2001)
    report = validity_functional(MediumModel(eps2=fine), grid)
    assert np.all(np.isfinite(report.lhs))


def test_wkb_residual_shrinks_as_margin_grows():
    grid = AxisGrid(z_min=-50.0, z_max=50.0, n=20001)
    omega = 2.0
    residuals, margins = [], []
    for gamma in (2.5, 5.0, 10.0):
        model = lorentzian_medium(a=0.2, gamma=gamma)
        table = build_phase_table(model, grid)
        psi = psi_wkb(model, table, omega).values
        op = discretize_h2(model, grid, "dirichlet")
        residual = apply_h2(op, psi) - omega ** 2 * psi
        inner = slice(2, -2)
        residuals.append(np.linalg.norm(residual[inner]) / np.linalg.norm(omega ** 2 * psi[inner]))
        margins.append(validity_functional(model, grid).margin_at(omega))
    assert margins[0] < margins[1] < margins[2]
    assert residuals[0] > residuals[1] > residuals[2]
