"""
Convolution solutions of the initial-value problem and the damped temperature.
"""

import math

import mpmath
import numpy as np
import pytest

from kgt.calculations.evolution import Evolution
from kgt.calculations.fdtd import FDTDVerifier
from kgt.calculations.physical_parameters import PhysicalParameters
from kgt.errors import DomainError, PreconditionError
from kgt.models import (
    ConstantProfile,
    Equation,
    GaussianProfile,
    GridSpec1D,
    InitialData,
    KGParams,
    PhysicalParams,
    RectangleProfile,
    SampleGrid,
    SphereQuadrature,
    TabulatedProfile,
)

UNIT = KGParams(v=1.0, q_sq=1.0)
MASSLESS = KGParams(v=1.0, q_sq=0.0)
UNIFORM_PSI = InitialData(psi=ConstantProfile(amplitude=1.0))
GAUSSIAN_PHI = InitialData(phi=GaussianProfile(width=1.0))


# ============================================================================
# SPHERICAL MEANS
# ============================================================================

def test_spherical_mean_of_constant_is_constant():
    assert Evolution.spherical_mean(ConstantProfile(amplitude=2.5), 0.3, 1.7) == pytest.approx(2.5, rel=1e-14)


@pytest.mark.parametrize("r, radius", [(0.7, 0.5), (2.0, 1.5), (0.0, 1.2)])
def test_spherical_mean_of_gaussian(r, radius):
    profile = GaussianProfile(width=1.0)
    if r == 0.0:
        expected = math.exp(-radius * radius / 2.0)
    else:
        expected = (math.exp(-(r - radius) ** 2 / 2.0) - math.exp(-(r + radius) ** 2 / 2.0)) / (2.0 * r * radius)
    assert Evolution.spherical_mean(profile, r, radius) == pytest.approx(expected, rel=1e-10)


def test_spherical_mean_vectorised_over_radius():
    radii = np.array([0.1, 0.5, 1.0])
    means = Evolution.spherical_mean(GaussianProfile(width=1.0), 0.4, radii)
    assert means.shape == (3,)
    assert means[0] == pytest.approx(Evolution.spherical_mean(GaussianProfile(width=1.0), 0.4, 0.1))


def _rectangle_mean(halfwidth, r, radius):
    upper = min(r + radius, halfwidth)
    lower = abs(r - radius)
    return max(upper * upper - lower * lower, 0.0) / (4.0 * r * radius)


@pytest.mark.parametrize("r, radius", [(1.0, 1.0), (0.3, 0.4), (2.0, 1.7), (0.2, 1.0)])
def test_spherical_mean_of_rectangle_is_exact(r, radius):
    profile = RectangleProfile(halfwidth=0.5)
    assert Evolution.spherical_mean(profile, r, radius) == pytest.approx(
        _rectangle_mean(0.5, r, radius), rel=1e-12, abs=1e-15
    )


def test_3d_rectangle_velocity_matches_radial_mean_quadrature():
    data = InitialData(psi=RectangleProfile(halfwidth=0.5))

    def j1c(z):
        return mpmath.besselj(1, z) / z if z > 0 else mpmath.mpf(0.5)

    def integrand(eta):
        z = mpmath.sqrt(1 - eta * eta)
        return j1c(z) * eta * eta * _rectangle_mean(0.5, 1.0, float(eta))

    expected = _rectangle_mean(0.5, 1.0, 1.0) - float(mpmath.quad(integrand, [0.5, 1.0]))
    assert Evolution.solve_u_3d(data, 1.0, 1.0, UNIT) == pytest.approx(expected, rel=1e-8)


# ============================================================================
# 1D
# ============================================================================

def test_solve_u_1d_at_time_zero_returns_phi():
    data = InitialData(phi=GaussianProfile(center=0.3, width=0.7, amplitude=2.0), psi=ConstantProfile())
    assert Evolution.solve_u_1d(data, 0.5, 0.0, UNIT) == float(data.phi(0.5))


def test_uniform_psi_massless_gives_t():
    assert Evolution.solve_u_1d(UNIFORM_PSI, 0.3, 1.7, MASSLESS) == pytest.approx(1.7, rel=1e-12)


@pytest.mark.parametrize("q", [0.5, 1.0, 2.0])
def test_uniform_psi_reduces_to_ode(q):
    kg = KGParams(v=1.0, q_sq=q * q)
    t = 1.3
    for x in (-2.0, 0.0, 0.4):
        assert Evolution.solve_u_1d(UNIFORM_PSI, x, t, kg) == pytest.approx(math.sin(q * t) / q, rel=1e-8)


def test_uniform_psi_growing_branch():
    kg = KGParams(v=1.0, q_sq=-1.0)
    assert Evolution.solve_u_1d(UNIFORM_PSI, 0.0, 1.2, kg) == pytest.approx(math.sinh(1.2), rel=1e-8)


def test_massless_gaussian_splits_like_dalembert():
    phi = GAUSSIAN_PHI.phi
    t = 2.0
    for x in (-1.0, 0.0, 0.5, 2.0, 3.5):
        expected = 0.5 * float(phi(x - t) + phi(x + t))
        assert Evolution.solve_u_1d(GAUSSIAN_PHI, x, t, MASSLESS) == pytest.approx(expected, abs=1e-10)


def test_exact_zero_outside_domain_of_influence():
    data = InitialData(phi=RectangleProfile(halfwidth=1.0), psi=RectangleProfile(halfwidth=0.5))
    assert Evolution.solve_u_1d(data, 3.0001, 2.0, UNIT) == 0.0
    assert Evolution.solve_u_1d(data, -3.5, 2.0, UNIT) == 0.0


def test_linearity():
    first = InitialData(phi=GaussianProfile(width=0.8), psi=RectangleProfile(halfwidth=0.6))
    second = InitialData(phi=RectangleProfile(center=0.5, halfwidth=0.4), psi=GaussianProfile(width=0.5))
    combined = InitialData(
        phi=TabulatedProfile(positions=(-1.0, 0.0, 1.0), values=(0.0, 3.0, 0.0), support=(-1.0, 1.0)),
        psi=TabulatedProfile(positions=(-1.0, 0.0, 1.0), values=(0.0, -2.0, 0.0), support=(-1.0, 1.0)),
    )
    part_phi = InitialData(phi=combined.phi)
    part_psi = InitialData(psi=combined.psi)
    for x in (-0.5, 0.2, 1.4):
        total = Evolution.solve_u_1d(combined, x, 1.1, UNIT)
        pieces = Evolution.solve_u_1d(part_phi, x, 1.1, UNIT) + Evolution.solve_u_1d(part_psi, x, 1.1, UNIT)
        assert total == pytest.approx(pieces, abs=1e-9)
    scaled = Evolution.solve_u_1d(first, 0.3, 1.5, UNIT) * 2.0 + Evolution.solve_u_1d(second, 0.3, 1.5, UNIT)
    doubled = InitialData(
        phi=GaussianProfile(width=0.8, amplitude=2.0),
        psi=RectangleProfile(halfwidth=0.6, amplitude=2.0),
    )
    assert Evolution.solve_u_1d(doubled, 0.3, 1.5, UNIT) + Evolution.solve_u_1d(second, 0.3, 1.5, UNIT) == pytest.approx(
        scaled, abs=1e-9
    )


def test_time_derivative_at_zero_recovers_psi():
    phi = GaussianProfile(width=1.0)
    psi = GaussianProfile(width=0.7, amplitude=0.4)
    forward = InitialData(phi=phi, psi=psi)
    backward = InitialData(phi=phi, psi=psi.model_copy(update={"amplitude": -0.4}))
    h = 1e-3
    for x in (-0.5, 0.0, 0.8):
        slope = (Evolution.solve_u_1d(forward, x, h, UNIT) - Evolution.solve_u_1d(backward, x, h, UNIT)) / (2 * h)
        assert slope == pytest.approx(float(psi(x)), abs=1e-6)


def test_time_reversal():
    data = InitialData(phi=GaussianProfile(width=1.0), psi=GaussianProfile(width=0.8, amplitude=0.5))
    t, h = 0.6, 1e-4
    positions = np.linspace(-8.0, 8.0, 161)
    u = np.array([Evolution.solve_u_1d(data, x, t, UNIT) for x in positions])
    u_t = np.array([
        (Evolution.solve_u_1d(data, x, t + h, UNIT) - Evolution.solve_u_1d(data, x, t - h, UNIT)) / (2 * h)
        for x in positions
    ])
    reversed_data = InitialData(
        phi=TabulatedProfile(positions=tuple(positions), values=tuple(u), support=(-8.0, 8.0)),
        psi=TabulatedProfile(positions=tuple(positions), values=tuple(-u_t), support=(-8.0, 8.0)),
    )
    for x in (-0.5, 0.0, 1.0):
        # piecewise-linear resampling limits the recovery to O(spacing²)
        assert Evolution.solve_u_1d(reversed_data, x, t, UNIT) == pytest.approx(float(data.phi(x)), abs=5e-3)


def test_solve_u_1d_rejects_negative_time():
    with pytest.raises(DomainError):
        Evolution.solve_u_1d(UNIFORM_PSI, 0.0, -1.0, UNIT)


# ============================================================================
# 3D
# ============================================================================

@pytest.mark.parametrize("kg, expected", [
    (MASSLESS, 1.3),
    (UNIT, math.sin(1.3)),
    (KGParams(v=1.0, q_sq=4.0), math.sin(2.6) / 2.0),
])
def test_uniform_psi_3d(kg, expected):
    for r in (0.0, 0.5, 3.0):
        assert Evolution.solve_u_3d(UNIFORM_PSI, r, 1.3, kg) == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize("r", [0.0, 0.5, 1.5, 4.0])
def test_massless_gaussian_matches_kirchhoff(r):
    t = 2.0

    def exact(r_):
        if r_ == 0.0:
            return (1.0 - t * t) * math.exp(-t * t / 2.0)
        return ((r_ - t) * math.exp(-(r_ - t) ** 2 / 2) + (r_ + t) * math.exp(-(r_ + t) ** 2 / 2)) / (2 * r_)

    assert Evolution.solve_u_3d(GAUSSIAN_PHI, r, t, MASSLESS) == pytest.approx(exact(r), abs=1e-12)


def test_3d_matches_radial_fdtd():
    data = InitialData(phi=GaussianProfile(width=1.0), psi=GaussianProfile(width=1.0, amplitude=0.5))
    grid = GridSpec1D.from_cfl(0.0, 15.0, 301, UNIT.v, 2.0)
    numeric = FDTDVerifier.run_radial_3d(data, grid, UNIT, math.inf, Equation.UNDAMPED_EQ13)
    for index in (0, 20, 40, 60):
        r = float(numeric.positions[index])
        assert Evolution.solve_u_3d(data, r, grid.t_final, UNIT) == pytest.approx(numeric.values[index], abs=2e-3)


def test_3d_finite_propagation():
    data = InitialData(psi=RectangleProfile(halfwidth=1.0))
    assert Evolution.solve_u_3d(data, 3.5, 2.0, UNIT) == 0.0


def test_3d_requires_symmetric_data():
    data = InitialData(phi=GaussianProfile(center=0.5, width=1.0))
    with pytest.raises(PreconditionError):
        Evolution.solve_u_3d(data, 1.0, 1.0, UNIT)


def test_3d_coarse_sphere_rule():
    sphere = SphereQuadrature(n_theta=8, n_phi=16)
    assert Evolution.solve_u_3d(UNIFORM_PSI, 1.0, 1.3, UNIT, sphere) == pytest.approx(math.sin(1.3), rel=1e-8)


@pytest.mark.parametrize("r", [0.0, 0.6, 2.5])
def test_3d_linearity(r):
    t = 1.4
    first = InitialData(phi=GaussianProfile(width=1.0))
    second = InitialData(psi=RectangleProfile(halfwidth=0.8))
    combined = InitialData(
        phi=GaussianProfile(width=1.0, amplitude=2.0),
        psi=RectangleProfile(halfwidth=0.8, amplitude=-3.0),
    )
    expected = 2.0 * Evolution.solve_u_3d(first, r, t, UNIT) - 3.0 * Evolution.solve_u_3d(second, r, t, UNIT)
    assert Evolution.solve_u_3d(combined, r, t, UNIT) == pytest.approx(expected, rel=1e-8, abs=1e-12)


# ============================================================================
# TEMPERATURE
# ============================================================================

def test_temperature_from_u():
    assert Evolution.temperature_from_u(3.0, 0.0, 1.0) == 3.0
    tau = 2.5e-17
    assert Evolution.temperature_from_u(3.0, 2.0 * tau * math.log(2.0), tau) == pytest.approx(1.5, rel=1e-15)
    assert Evolution.temperature_from_u(3.0, 10.0, math.inf) == 3.0
    np.testing.assert_allclose(Evolution.temperature_from_u(np.ones(3), 2.0, 1.0), np.full(3, math.exp(-1.0)))


@pytest.mark.parametrize("tau", [0.0, -1.0])
def test_temperature_from_u_rejects_non_positive_tau(tau):
    with pytest.raises(DomainError):
        Evolution.temperature_from_u(1.0, 1.0, tau)


def test_zero_data_gives_zero_grid():
    field = Evolution.evolve_u_grid(InitialData(), SampleGrid(origin=-1.0, spacing=0.5, n=5), 1.0, UNIT)
    np.testing.assert_array_equal(field.values, np.zeros(5))
    assert field.kind == "u_field"


def test_evolve_temperature_grid_with_electron_defaults():
    p = PhysicalParams()
    tau = PhysicalParameters.relaxation_time(p)
    kg = PhysicalParameters.kg_params(p)
    grid = SampleGrid(origin=-1e-10, spacing=5e-11, n=5)
    t = tau
    temperature = Evolution.evolve_temperature_grid(UNIFORM_PSI, grid, t, p)
    expected = math.sin(kg.q_abs * t) / kg.q_abs * math.exp(-0.5)
    np.testing.assert_allclose(temperature.values, expected, rtol=1e-8)
    assert temperature.kind == "temperature"
    assert temperature.tau == tau

    u = Evolution.evolve_u_grid(UNIFORM_PSI, grid, t, kg, tau)
    np.testing.assert_allclose(temperature.values * math.exp(t / (2 * tau)), u.values, rtol=1e-15)


def test_evolve_temperature_grid_matches_damped_fdtd():
    p = PhysicalParams()
    tau = PhysicalParameters.relaxation_time(p)
    kg = PhysicalParameters.kg_params(p)
    width = 1e-10
    data = InitialData(phi=GaussianProfile(width=width, amplitude=300.0))
    t = 5.0 * tau
    fdtd_grid = GridSpec1D.from_cfl(-1.5e-9, 1.5e-9, 601, kg.v, t)
    numeric = FDTDVerifier.run_1d(data, fdtd_grid, kg, tau, Equation.DAMPED_EQ1)
    stride = 10
    sample = SampleGrid(origin=-1.5e-9, spacing=fdtd_grid.dx * stride, n=61)
    analytic = Evolution.evolve_temperature_grid(data, sample, fdtd_grid.t_final, p)
    np.testing.assert_allclose(analytic.values, numeric.values[::stride], atol=0.3)
