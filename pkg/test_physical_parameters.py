"""
Derived parameter chain: v, tau, q², sigma0, lambda_B.
"""

import logging
import math

import pytest
from pydantic import ValidationError

from kgt.calculations.physical_parameters import PhysicalParameters
from kgt.errors import DomainError
from kgt.models import ALPHA, ELECTRON_MASS, HBAR, SPEED_OF_LIGHT, PhysicalParams


@pytest.fixture
def electron():
    return PhysicalParams()


def test_wave_speed_is_alpha_c(electron):
    assert PhysicalParameters.wave_speed(electron) == pytest.approx(ALPHA * SPEED_OF_LIGHT, rel=1e-15)
    assert PhysicalParameters.wave_speed(PhysicalParams(alpha=1.0)) == SPEED_OF_LIGHT


def test_relaxation_time_for_electron(electron):
    tau = PhysicalParameters.relaxation_time(electron)
    oracle = HBAR / (ELECTRON_MASS * (ALPHA * SPEED_OF_LIGHT) ** 2)
    assert tau == pytest.approx(oracle, rel=1e-12)
    assert tau == pytest.approx(2.42e-17, rel=0.01)
    # attosecond scale
    assert 1e-18 < tau < 1e-16


def test_conductivity_for_electron(electron):
    sigma0 = PhysicalParameters.conductivity(electron)
    assert sigma0 == pytest.approx(3.66e5, rel=0.01)
    # same order as the rounded value 1e6 quoted for inner-atomic space-time
    assert 1e6 / 3 < sigma0 < 3e6


def test_conductivity_identity(electron):
    agree, residual = PhysicalParameters.conductivity_identity_check(electron)
    assert agree
    assert residual <= 1e-12


def test_conductivity_identity_detects_wrong_wavelength(electron):
    wrong = 1.01 * PhysicalParameters.de_broglie_wavelength(electron)
    agree, residual = PhysicalParameters.conductivity_identity_check(electron, lambda_b_override=wrong)
    assert not agree
    assert residual == pytest.approx(0.01 / 1.01, rel=1e-6)


def test_q_squared_rydberg_default_is_three_quarters_over_tau_squared(electron):
    tau = PhysicalParameters.relaxation_time(electron)
    assert PhysicalParameters.q_squared(electron) == pytest.approx(0.75 / tau**2, rel=1e-8)


def test_q_squared_negative_without_potential(caplog):
    p = PhysicalParams(v0=0.0)
    tau = PhysicalParameters.relaxation_time(p)
    assert PhysicalParameters.q_squared(p) == pytest.approx(-0.25 / tau**2, rel=1e-12)
    with caplog.at_level(logging.WARNING):
        derived = PhysicalParameters.derive(p)
    assert derived.q_sq < 0
    assert "q²" in caplog.text


def test_de_broglie_wavelength(electron):
    lambda_b = PhysicalParameters.de_broglie_wavelength(electron)
    # reduced Compton wavelength over alpha: the Bohr radius
    assert lambda_b == pytest.approx(5.29177210903e-11, rel=1e-9)


def test_derive_matches_individual_operations(electron):
    derived = PhysicalParameters.derive(electron)
    assert derived.v == PhysicalParameters.wave_speed(electron)
    assert derived.tau == PhysicalParameters.relaxation_time(electron)
    assert derived.q_sq == PhysicalParameters.q_squared(electron)
    assert derived.sigma0 == PhysicalParameters.conductivity(electron)
    assert derived.lambda_b == PhysicalParameters.de_broglie_wavelength(electron)


def test_kg_params(electron):
    kg = PhysicalParameters.kg_params(electron)
    assert kg.v == PhysicalParameters.wave_speed(electron)
    assert kg.oscillatory
    assert kg.q_abs == pytest.approx(math.sqrt(0.75) / PhysicalParameters.relaxation_time(electron), rel=1e-8)


@pytest.mark.parametrize("mass", [0.0, -1e-30])
def test_non_positive_mass_rejected_by_model(mass):
    with pytest.raises(ValidationError):
        PhysicalParams(mass=mass)


def test_non_positive_mass_rejected_by_operations():
    p = PhysicalParams.model_construct(mass=0.0)
    with pytest.raises(DomainError):
        PhysicalParameters.relaxation_time(p)
    with pytest.raises(DomainError):
        PhysicalParameters.de_broglie_wavelength(p)


def test_non_finite_parameters_rejected():
    with pytest.raises(ValidationError):
        PhysicalParams(c=math.inf)


@pytest.mark.parametrize("params", [
    PhysicalParams(),
    PhysicalParams(mass=3.0 * ELECTRON_MASS, alpha=0.02),
    PhysicalParams(epsilon0=1.0, hbar=2.0e-34, v0=0.0),
])
def test_conductivity_and_relaxation_time_identities(params):
    tau = PhysicalParameters.relaxation_time(params)
    v = PhysicalParameters.wave_speed(params)
    assert PhysicalParameters.conductivity(params) * tau == pytest.approx(params.epsilon0, rel=1e-12)
    assert tau * v * v * params.mass == pytest.approx(params.hbar, rel=1e-12)


def test_q_squared_vanishes_at_an_eighth_of_m_v_squared(electron):
    v = PhysicalParameters.wave_speed(electron)
    threshold = electron.model_copy(update={"v0": electron.mass * v * v / 8.0})
    scale = (electron.mass * v * v / (2.0 * HBAR)) ** 2
    assert abs(PhysicalParameters.q_squared(threshold)) <= 1e-12 * scale


def test_q_squared_is_linear_in_potential_with_fixed_slope(electron):
    v = PhysicalParameters.wave_speed(electron)
    slope = 2.0 * electron.mass * v * v / HBAR**2
    potentials = [0.0, 1e-19, 2e-18, 5e-18]
    values = [PhysicalParameters.q_squared(electron.model_copy(update={"v0": v0})) for v0 in potentials]
    assert all(b > a for a, b in zip(values, values[1:]))
    for v0, value in zip(potentials[1:], values[1:]):
        assert (value - values[0]) / v0 == pytest.approx(slope, rel=1e-10)


def test_doubling_epsilon0_doubles_conductivity(electron):
    doubled = electron.model_copy(update={"epsilon0": 2.0 * electron.epsilon0})
    assert PhysicalParameters.conductivity(doubled) == pytest.approx(
        2.0 * PhysicalParameters.conductivity(electron), rel=1e-14
    )


def test_halving_alpha_doubles_de_broglie_wavelength(electron):
    halved = electron.model_copy(update={"alpha": electron.alpha / 2.0})
    assert PhysicalParameters.de_broglie_wavelength(halved) == pytest.approx(
        2.0 * PhysicalParameters.de_broglie_wavelength(electron), rel=1e-14
    )
