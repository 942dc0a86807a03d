"""
Tests for the Lorentzian first-order mode function and its finite-difference check
"""
import math

import numpy as np
import pytest

from wkbwave.exceptions import DegenerateStep, NotHomogeneous, ResonanceProximity
from wkbwave.models import AxisGrid, FrequencyGrid, LorentzCase, ModeFunction, Taper
from wkbwave.services.perturb import (
    analytic_bracket,
    default_exclusion_radius,
    fit_decay_rate,
    frak_amplitude,
    input_amplitude,
    mode_function_first_order,
    numeric_bracket,
    numeric_mode_derivative,
    plane_wave_constants,
    resonance_mask,
    resonance_peak,
    second_difference,
)


@pytest.fixture
def case() -> LorentzCase:
    return LorentzCase(a=0.01, gamma=5.0, k=1.0)


@pytest.fixture
def lorentz_zgrid() -> AxisGrid:
    return AxisGrid(z_min=-200.0, z_max=200.0, n=4001, taper=Taper(kind="erf", fraction=0.075))


@pytest.fixture
def lorentz_omega() -> FrequencyGrid:
    return FrequencyGrid.uniform(0.05, 0.95, 91)


def test_vacuum_plane_wave_constants(vacuum):
    amplitude, k = plane_wave_constants(vacuum, 1.7)
    assert amplitude == pytest.approx((2 * math.pi) ** -0.5, rel=1e-14)
    assert k == pytest.approx(1.7, rel=1e-14)


def test_dispersive_plane_wave_constants(dispersive):
    amplitude, k = plane_wave_constants(dispersive, 1.0)
    assert k == pytest.approx(math.sqrt(2.0), rel=1e-14)
    assert amplitude == pytest.approx(0.5 ** 0.25 * math.sqrt(1.5 / (2 * math.pi)), rel=1e-12)


def test_plane_wave_constants_need_homogeneous_medium(lorentzian):
    with pytest.raises(NotHomogeneous):
        plane_wave_constants(lorentzian, 1.0)


def test_resonance_peak_in_vacuum(case):
    omega_star, weight = resonance_peak(case)
    assert omega_star == pytest.approx(1.0, rel=1e-12)
    assert weight == pytest.approx(1.0, rel=1e-12)
    assert input_amplitude(case) == pytest.approx((2 * math.pi) ** -0.5, rel=1e-14)


def test_explicit_amplitude_scales_weight(case):
    scaled = case.model_copy(update={"amplitude": 2.0 * (2 * math.pi) ** -0.5})
    assert frak_amplitude(scaled, 1.0) == pytest.approx(2.0, rel=1e-12)


def test_default_exclusion_radius(case):
    assert default_exclusion_radius(case, 400.0) == pytest.approx(6 * math.pi / 400.0)
    assert default_exclusion_radius(case, 100.0) == pytest.approx(6 * math.pi / 100.0)


def test_default_exclusion_radius_follows_narrow_inhomogeneity():
    narrow = LorentzCase(a=0.01, gamma=1.0, k=1.0)
    assert default_exclusion_radius(narrow, 400.0) == pytest.approx(0.2)


def test_first_order_sign_changes_at_resonance_and_at_three_k(case):
    omega = 0.025 + 0.05 * np.arange(80)
    omega = omega[np.abs(omega - 1.0) > 0.15]
    grid = FrequencyGrid(omega=omega.tolist(), widths=[0.05] * omega.size)
    values = mode_function_first_order(case, grid, radius=0.1).values.real

    assert np.all(values[omega < 1.0] > 0)
    assert np.all(values[(omega > 1.0) & (omega < 3.0)] < 0)
    assert np.all(values[omega > 3.0] > 0)
    above = values[omega > 1.0]
    assert int(np.sum(np.sign(above[1:]) != np.sign(above[:-1]))) == 1


def test_analytic_bracket_value(case):
    # detuning 1/gamma
    value = analytic_bracket(case, 0.8)
    assert float(value) == pytest.approx(math.exp(-1.0) * 2.2 / 1.6, rel=1e-12)


def test_analytic_bracket_changes_sign_across_resonance(case):
    below, above = analytic_bracket(case, np.array([0.9, 1.1]))
    assert below > 0 > above


def test_first_order_refuses_resonant_samples(case):
    grid = FrequencyGrid.uniform(0.5, 1.5, 11)
    with pytest.raises(ResonanceProximity) as info:
        mode_function_first_order(case, grid, radius=0.05)
    assert info.value.omegas == [pytest.approx(1.0)]


def test_first_order_scales_with_strength(case, lorentz_omega):
    c = mode_function_first_order(case, lorentz_omega, length=400.0)
    doubled = mode_function_first_order(case.model_copy(update={"a": 0.02}), lorentz_omega, length=400.0)
    np.testing.assert_allclose(doubled.values, 2.0 * c.values, rtol=1e-12)
    assert not np.any(resonance_mask(case, lorentz_omega, 0.04))


def test_degenerate_step(case, lorentz_omega, lorentz_zgrid):
    with pytest.raises(DegenerateStep):
        numeric_mode_derivative(case, lorentz_omega, lorentz_zgrid, (0.01, 0.01))
    with pytest.raises(ValueError):
        numeric_mode_derivative(case, lorentz_omega, lorentz_zgrid, (0.02, 0.01))


def test_numeric_derivative_matches_analytic(case, lorentz_omega, lorentz_zgrid):
    derivative = numeric_mode_derivative(case, lorentz_omega, lorentz_zgrid, (0.005, 0.01))
    fit = fit_decay_rate(case, derivative, window=(1.0, 4.0))
    assert fit.samples >= 20
    assert fit.max_relative_deviation <= 0.05
    assert fit.rate_error <= 0.1

    bracket = numeric_bracket(case, derivative)
    inside = np.isin(lorentz_omega.points, fit.omega)
    np.testing.assert_allclose(bracket[inside].real, analytic_bracket(case, lorentz_omega.points[inside]),
                               rtol=0.05)


def test_second_difference_is_quadratic_in_step(case, lorentz_omega, lorentz_zgrid):
    coarse = second_difference(case, lorentz_omega, lorentz_zgrid, (0.004, 0.008, 0.012))
    fine = second_difference(case, lorentz_omega, lorentz_zgrid, (0.002, 0.004, 0.006))
    detuning = np.abs(case.k - lorentz_omega.points)
    mask = (case.gamma * detuning >= 1.0) & (case.gamma * detuning <= 4.0)
    ratio = np.linalg.norm(coarse.values[mask]) / np.linalg.norm(fine.values[mask])
    assert 3.5 <= ratio <= 4.5


def test_second_difference_needs_equal_spacing(case, lorentz_omega, lorentz_zgrid):
    with pytest.raises(ValueError):
        second_difference(case, lorentz_omega, lorentz_zgrid, (0.001, 0.004, 0.006))


def test_fit_recovers_gamma_from_analytic_bracket(case, lorentz_omega):
    omega = lorentz_omega.points
    values = frak_amplitude(case, omega) * case.gamma * analytic_bracket(case, omega)
    fit = fit_decay_rate(case, ModeFunction(grid=lorentz_omega, values=values))
    assert fit.rate == pytest.approx(case.gamma, rel=1e-9)
    assert fit.max_relative_deviation <= 1e-12
