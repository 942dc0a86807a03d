"""
Tests for projection, reconstruction and the discrete orthonormality /
completeness relations of the WKB basis
"""
import math

import numpy as np
import pytest

from wkbwave.models import (
    AxisGrid,
    DispersionFactor,
    FrequencyGrid,
    MediumModel,
    ModeFunction,
    SampledField,
    Taper,
    lorentzian_medium,
)
from wkbwave.services.media import f_values, invert_f
from wkbwave.services.modes import (
    completeness_residual,
    discrete_gram,
    gaussian_packet,
    mode_energy_fraction,
    natural_frequency_grid,
    project,
    reconstruct,
    reduced_mode_function,
    windowed_plane_wave,
)
from wkbwave.services.wkb import build_phase_table, e_field_wkb
from wkbwave.utils.helpers import relative_l2


@pytest.fixture
def tapered_slab() -> AxisGrid:
    return AxisGrid(z_min=-100.0, z_max=100.0, n=2001, taper=Taper(kind="cosine", fraction=0.1))


@pytest.mark.parametrize("eps1", [DispersionFactor(), DispersionFactor(kind="cauchy", A=1.0, B=0.5)])
def test_gram_is_identity_on_natural_grid(eps1, tapered_slab):
    model = MediumModel(eps1=eps1)
    table = build_phase_table(model, tapered_slab)
    omega_max = invert_f(model, f_values(model, 1.0) + 63.5 * 2 * math.pi / table.u_extent)
    grid = natural_frequency_grid(model, table, 1.0, omega_max)
    assert grid.n == 64
    gram = discrete_gram(model, table, grid)
    off = gram - np.diag(np.diag(gram))
    assert np.max(np.abs(off)) <= 1e-2
    np.testing.assert_allclose(np.diag(gram).real, 1.0, atol=2e-2)


def test_gram_does_not_see_dispersion(tapered_slab):
    vacuum = MediumModel()
    dispersive = MediumModel(eps1=DispersionFactor(kind="cauchy", A=1.0, B=0.5))
    grams = []
    for model in (vacuum, dispersive):
        table = build_phase_table(model, tapered_slab)
        omega_min = invert_f(model, 2.0)
        omega_max = invert_f(model, 2.0 + 31.5 * 2 * math.pi / table.u_extent)
        grams.append(discrete_gram(model, table, natural_frequency_grid(model, table, omega_min, omega_max)))
    np.testing.assert_allclose(grams[1], grams[0], atol=1e-8)


def test_single_point_gram(vacuum, slab_grid):
    table = build_phase_table(vacuum, slab_grid)
    width = 0.01
    gram = discrete_gram(vacuum, table, FrequencyGrid.single(2.0, width))
    assert gram.shape == (1, 1)
    assert gram[0, 0].real == pytest.approx(200.0 * width / (2 * math.pi), rel=1e-12)


def test_natural_grid_cell_widths(dispersive, slab_grid):
    table = build_phase_table(dispersive, slab_grid)
    grid = natural_frequency_grid(dispersive, table, 1.0, 1.5)
    f = f_values(dispersive, grid.points)
    np.testing.assert_allclose(np.diff(f), 2 * math.pi / table.u_extent, rtol=1e-9)
    fp = np.sqrt(1 + grid.points ** 2) + grid.points ** 2 / np.sqrt(1 + grid.points ** 2)
    np.testing.assert_allclose(grid.cell_widths, 2 * math.pi / table.u_extent / fp, rtol=1e-12)


def test_zero_field_projects_to_zero(lorentzian, slab_grid):
    table = build_phase_table(lorentzian, slab_grid)
    zero = SampledField(grid=slab_grid, values=np.zeros(slab_grid.n))
    c = project(lorentzian, table, FrequencyGrid.uniform(0.5, 2.0, 16), zero)
    assert np.all(c.values == 0)
    assert completeness_residual(lorentzian, table, FrequencyGrid.uniform(0.5, 2.0, 16), zero) == 0.0
    assert mode_energy_fraction(lorentzian, c, 1.0, 0.1) == 0.0


def test_projection_is_linear(lorentzian, tapered_slab):
    table = build_phase_table(lorentzian, tapered_slab)
    grid = FrequencyGrid.uniform(0.5, 3.0, 40)
    e = gaussian_packet(tapered_slab, 5.0, 0.0, 2.0)
    f = windowed_plane_wave(tapered_slab, 1.3)
    alpha, beta = 0.7 - 0.2j, -1.9
    combined = e.with_values(alpha * e.values + beta * f.values)
    c = project(lorentzian, table, grid, combined).values
    expected = alpha * project(lorentzian, table, grid, e).values + beta * project(lorentzian, table, grid, f).values
    assert np.max(np.abs(c - expected)) <= 1e-12 * np.max(np.abs(expected))


def test_gaussian_transform(vacuum, slab_grid):
    table = build_phase_table(vacuum, slab_grid)
    grid = FrequencyGrid.uniform(-1.0, 1.0, 41)
    sigma = 5.0
    c = project(vacuum, table, grid, gaussian_packet(slab_grid, sigma))
    expected = sigma * np.exp(-grid.points ** 2 * sigma ** 2 / 2)
    np.testing.assert_allclose(c.values, expected, atol=1e-6)


def test_single_mode_reconstructs_time_harmonic_field(lorentzian, slab_grid):
    table = build_phase_table(lorentzian, slab_grid)
    width = 0.05
    c = ModeFunction(grid=FrequencyGrid.single(2.0, width), values=[1.0 / width])
    field = reconstruct(lorentzian, table, c, 3.0)
    np.testing.assert_allclose(field.values, e_field_wkb(lorentzian, table, 2.0, 3.0).values, rtol=1e-12)


def test_round_trip_in_dispersive_lorentzian_slab(slab_grid):
    model = lorentzian_medium(a=0.1, gamma=5.0, eps1=DispersionFactor(kind="cauchy", A=1.0, B=0.01))
    table = build_phase_table(model, slab_grid)
    grid = natural_frequency_grid(model, table, 1.0, 5.0)
    e0 = gaussian_packet(slab_grid, sigma=5.0, z0=0.0, k0=3.0)

    rebuilt = reconstruct(model, table, project(model, table, grid, e0), 0.0)
    error = relative_l2(rebuilt, e0)
    assert error <= 1e-3
    assert error <= 2.0 * completeness_residual(model, table, grid, e0) + 1e-12


def test_completeness_residual_counts_out_of_band_energy(vacuum, slab_grid):
    table = build_phase_table(vacuum, slab_grid)
    grid = natural_frequency_grid(vacuum, table, 1.0, 5.0)
    inside = gaussian_packet(slab_grid, sigma=5.0, k0=3.0)
    outside = gaussian_packet(slab_grid, sigma=5.0, k0=8.0)
    assert completeness_residual(vacuum, table, grid, inside) <= 1e-3
    mixed = inside.with_values(inside.values + outside.values)
    # half of the energy lies above the band
    assert completeness_residual(vacuum, table, grid, mixed) == pytest.approx(math.sqrt(0.5), rel=1e-2)


def test_wkb_packet_translates_in_homogeneous_medium(vacuum, slab_grid):
    table = build_phase_table(vacuum, slab_grid)
    grid = natural_frequency_grid(vacuum, table, 1.0, 5.0)
    e0 = gaussian_packet(slab_grid, sigma=5.0, z0=-20.0, k0=3.0)
    c = project(vacuum, table, grid, e0)
    later = reconstruct(vacuum, table, c, 30.0)
    np.testing.assert_allclose(np.abs(later.values), np.abs(gaussian_packet(slab_grid, 5.0, 10.0, 3.0).values),
                               atol=1e-3)


def test_dispersion_is_invisible_in_homogeneous_media():
    grid = AxisGrid(z_min=-100.0, z_max=100.0, n=2001, taper=Taper(kind="erf", fraction=0.075))
    k = 3.0
    profiles = []
    for model in (MediumModel(), MediumModel(eps1=DispersionFactor(kind="cauchy", A=1.0, B=0.5))):
        table = build_phase_table(model, grid)
        omega_lo = invert_f(model, 2.0)
        omega_hi = invert_f(model, 4.0)
        omega_grid = natural_frequency_grid(model, table, omega_lo, omega_hi)
        c = project(model, table, omega_grid, windowed_plane_wave(grid, k))
        peak = int(np.argmax(np.abs(c.values)))
        assert abs(f_values(model, omega_grid.points[peak]) - k) <= 2 * math.pi / table.u_extent
        reduced = np.abs(reduced_mode_function(model, c))
        profiles.append(reduced / np.max(reduced))
    np.testing.assert_allclose(profiles[1], profiles[0], atol=1e-6)


def test_dispersion_becomes_visible_with_inhomogeneity():
    grid = AxisGrid(z_min=-200.0, z_max=200.0, n=4001, taper=Taper(kind="erf", fraction=0.075))
    omega_grid = FrequencyGrid.uniform(0.3, 1.7, 561)
    e0 = windowed_plane_wave(grid, 1.0)
    fractions = []
    for a in (0.0, 0.01, 0.02, 0.04):
        model = MediumModel() if a == 0.0 else lorentzian_medium(a=a, gamma=5.0)
        table = build_phase_table(model, grid)
        c = project(model, table, omega_grid, e0)
        fractions.append(mode_energy_fraction(model, c, 1.0, 0.15))
    floor = fractions[0]
    assert fractions[1] < fractions[2] < fractions[3]
    assert fractions[3] > 5.0 * floor


def test_windowed_parseval_in_dispersive_lorentzian_slab(tapered_slab):
    model = lorentzian_medium(a=0.1, gamma=5.0, eps1=DispersionFactor(kind="cauchy", A=1.0, B=0.01))
    table = build_phase_table(model, tapered_slab)
    omega_grid = natural_frequency_grid(model, table, 1.0, 5.0)
    e0 = gaussian_packet(tapered_slab, sigma=5.0, k0=3.0)
    c = project(model, table, omega_grid, e0)

    modal = float(np.sum(omega_grid.trapezoid_weights() * np.abs(c.values) ** 2
                         / np.asarray(model.eps1(omega_grid.points))))
    windowed = tapered_slab.taper_weights() * np.asarray(e0.values)
    spatial = float(np.sum(tapered_slab.trapezoid_weights() * np.asarray(model.eps2(tapered_slab.z))
                           * np.abs(windowed) ** 2))
    assert modal == pytest.approx(spatial, rel=1e-2)
