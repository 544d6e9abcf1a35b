"""
Acceptance suite: closed forms against the spectral and finite-difference
oracles, convolution solutions against the FDTD solver, and the Bessel
implementations against an arbitrary-precision power series.

Each case returns a CaseResult; ``run_cases`` drives them in a fixed order.
"""

import logging
import math
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import mpmath
import numpy as np

from kgt.calculations.evolution import Evolution
from kgt.calculations.fdtd import FDTDVerifier
from kgt.calculations.green_functions import GreenFunctions
from kgt.calculations.special_functions import bessel_i0, bessel_i1, bessel_j0, bessel_j1
from kgt.errors import ConfigurationError, KGTError
from kgt.models import (
    CaseResult,
    ConstantProfile,
    Equation,
    FieldGrid,
    GaussianProfile,
    GridSpec1D,
    InitialData,
    KGParams,
    SampleGrid,
)

logger = logging.getLogger(__name__)

FAULTS = ("prefactor",)

STANDARD_Q = (0.5, 1.0, 2.0)
# (r, t) with v = 1, all at least 0.1 v t inside the cone
STANDARD_POINTS = ((1.0, 2.0), (0.5, 1.0), (0.2, 1.5), (1.5, 2.5), (2.0, 2.5))

CONVERGENCE_DX = (0.1, 0.05, 0.025)
ORDER_MIN = 1.9
RATIO_RANGE = (3.5, 4.5)


def standard_kg(q: float) -> KGParams:
    return KGParams(v=1.0, q_sq=q * q)


def _fault_scale(fault: Optional[str]) -> float:
    """Wrong closed-form prefactor (1/(2 pi) for 1/(4 pi) and alike) when injected."""
    return 2.0 if fault == "prefactor" else 1.0


def _orders(errors: List[float], steps: List[float]) -> List[float]:
    return [
        math.log(errors[i] / errors[i + 1]) / math.log(steps[i] / steps[i + 1])
        for i in range(len(errors) - 1)
    ]


def _coarse(field: FieldGrid, stride: int) -> FieldGrid:
    """Every ``stride``-th node of a field."""
    return field.model_copy(update={
        "values": field.values[::stride],
        "spacing": field.spacing * stride,
    })


# ============================================================================
# GREEN FUNCTION CASES
# ============================================================================

def case_green1d_spectral(fault: Optional[str] = None) -> CaseResult:
    """Closed-form 1D Green function against the spectral inversion at 25 points per q."""
    t = 2.0
    x = np.linspace(-0.9 * t, 0.9 * t, 25)
    norms = {}
    for q in STANDARD_Q:
        kg = standard_kg(q)
        closed = GreenFunctions.green_1d(x, t, kg) * _fault_scale(fault)
        spectral, _ = GreenFunctions.spectral_green_1d(x, t, kg)
        norms[f"max_abs_diff_q{q:g}"] = float(np.max(np.abs(closed - spectral)))
    passed = all(value <= 1e-4 for value in norms.values())
    return CaseResult(case="green1d_spectral", norms=norms, passed=passed)


def case_green3d_three_way(fault: Optional[str] = None) -> CaseResult:
    """Regular 3D part: closed form, 1D-derivative oracle and radial spectral oracle."""
    worst_deriv = 0.0
    worst_spectral = 0.0
    for q in STANDARD_Q:
        kg = standard_kg(q)
        for r, t in STANDARD_POINTS:
            closed = GreenFunctions.green_3d(r, t, kg).regular * _fault_scale(fault)
            deriv = GreenFunctions.green_3d_from_1d(r, t, kg, 1e-5)
            spectral, _ = GreenFunctions.spectral_green_3d_radial(r, t, kg)
            worst_deriv = max(worst_deriv, abs(closed - deriv) / abs(closed))
            worst_spectral = max(worst_spectral, abs(closed - spectral))
    norms = {"max_rel_closed_vs_deriv": worst_deriv, "max_abs_closed_vs_spectral": worst_spectral}
    passed = worst_deriv <= 1e-6 and worst_spectral <= 1e-3
    return CaseResult(case="green3d_three_way", norms=norms, passed=passed)


def case_causality(fault: Optional[str] = None) -> CaseResult:
    """Bit-exact zeros outside the cone (10^4 points per dimension and sign of q²)."""
    t = 1.5
    n_bad = 0
    checked = 0
    for q_sq in (1.0, -1.0):
        kg = KGParams(v=1.0, q_sq=q_sq)
        vt = kg.v * t
        outside = vt * np.linspace(1.0 + 1e-6, 20.0, 10_000)
        g1 = GreenFunctions.green_1d(np.concatenate([-outside[::2], outside[1::2]]), t, kg)
        g3 = GreenFunctions.green_3d_regular(outside, t, kg)
        for values in (g1, g3):
            n_bad += int(np.count_nonzero(values) + np.count_nonzero(np.signbit(values)))
            checked += values.size
    return CaseResult(
        case="causality",
        norms={"points_checked": float(checked), "nonzero_or_negative_zero": float(n_bad)},
        passed=n_bad == 0,
    )


def case_q_zero_limits(fault: Optional[str] = None) -> CaseResult:
    """q = 0: G1 = 1/(2v) inside the cone and the regular 3D part vanishes identically."""
    kg = KGParams(v=3.0, q_sq=0.0)
    t = 0.7
    r = np.linspace(0.0, 0.999 * kg.v * t, 1001)
    g1 = GreenFunctions.green_1d(r, t, kg) * _fault_scale(fault)
    g3 = GreenFunctions.green_3d_regular(r, t, kg)
    deviation = float(np.max(np.abs(g1 - 1.0 / (2.0 * kg.v))))
    nonzero = int(np.count_nonzero(g3))
    return CaseResult(
        case="q_zero_limits",
        norms={"max_abs_g1_deviation": deviation, "g3_nonzero": float(nonzero)},
        passed=deviation <= 1e-12 and nonzero == 0,
    )


# ============================================================================
# EVOLUTION AND FDTD CASES
# ============================================================================

def _uniform_fdtd_error(kg: KGParams, t: float, dx: float, radial: bool) -> Tuple[float, float]:
    """(|u - sin(qt)/q| at a node far from the boundary, dt) for uniform psi = 1."""
    data = InitialData(psi=ConstantProfile(amplitude=1.0))
    half = 2.0 * kg.v * t + 1.0
    x_min = 0.0 if radial else -half
    grid = GridSpec1D.from_cfl(x_min, half, int(round((half - x_min) / dx)) + 1, kg.v, t)
    if radial:
        field = FDTDVerifier.run_radial_3d(data, grid, kg, math.inf, Equation.UNDAMPED_EQ13)
        probe = 0
    else:
        field = FDTDVerifier.run_1d(data, grid, kg, math.inf, Equation.UNDAMPED_EQ13)
        probe = len(field.values) // 2
    exact = math.sin(kg.q_abs * t) / kg.q_abs
    return abs(field.values[probe] - exact), grid.dt


def case_uniform_data_ode(fault: Optional[str] = None) -> CaseResult:
    """psi = 1, phi = 0 reduces to u = sin(qt)/q (quadrature and FDTD paths)."""
    data = InitialData(psi=ConstantProfile(amplitude=1.0))
    t = 1.3
    worst = 0.0
    for q in STANDARD_Q:
        kg = standard_kg(q)
        exact = math.sin(q * t) / q
        for x in (-0.7, 0.0, 2.5):
            worst = max(worst, abs(Evolution.solve_u_1d(data, x, t, kg) - exact) / abs(exact))
        for r in (0.0, 0.4, 2.5):
            worst = max(worst, abs(Evolution.solve_u_3d(data, r, t, kg) - exact) / abs(exact))

    kg = standard_kg(1.0)
    orders = []
    for radial in (False, True):
        errors, steps = zip(*(_uniform_fdtd_error(kg, 2.0, dx, radial) for dx in CONVERGENCE_DX))
        orders.extend(_orders(list(errors), list(steps)))
    passed = worst <= 1e-8 and all(order >= ORDER_MIN for order in orders)
    return CaseResult(
        case="uniform_data_ode",
        norms={"max_rel_quadrature_error": worst},
        convergence_ratios=orders,
        passed=passed,
    )


def _gaussian_data() -> InitialData:
    return InitialData(phi=GaussianProfile(center=0.0, width=1.0, amplitude=1.0))


def case_fdtd_convergence(fault: Optional[str] = None) -> CaseResult:
    """FDTD against the convolution solution; L2 error ratio per halving of dx."""
    kg = standard_kg(1.0)
    data = _gaussian_data()
    t = 2.7
    coarse_dx = CONVERGENCE_DX[0]
    reference = Evolution.evolve_u_grid(
        data, SampleGrid(origin=-15.0, spacing=coarse_dx, n=301), t, kg
    )
    errors = []
    for dx in CONVERGENCE_DX:
        grid = GridSpec1D.from_cfl(-15.0, 15.0, int(round(30.0 / dx)) + 1, kg.v, t)
        numeric = FDTDVerifier.run_1d(data, grid, kg, math.inf, Equation.UNDAMPED_EQ13)
        stride = int(round(coarse_dx / dx))
        errors.append(FDTDVerifier.compare(reference, _coarse(numeric, stride)).l2_error)
    ratios = [errors[i] / errors[i + 1] for i in range(len(errors) - 1)]
    passed = all(RATIO_RANGE[0] <= ratio <= RATIO_RANGE[1] for ratio in ratios)
    return CaseResult(
        case="fdtd_convergence",
        norms={f"l2_error_dx{dx:g}": e for dx, e in zip(CONVERGENCE_DX, errors)},
        convergence_ratios=ratios,
        passed=passed,
    )


def case_substitution_identity(fault: Optional[str] = None) -> CaseResult:
    """Damped run equals exp(-t/2tau) times the undamped run, converging at second order."""
    kg = standard_kg(1.0)
    tau = 1.0
    data = _gaussian_data()
    t = 2.7
    differences = []
    steps = []
    for dx in CONVERGENCE_DX:
        grid = GridSpec1D.from_cfl(-15.0, 15.0, int(round(30.0 / dx)) + 1, kg.v, t)
        damped = FDTDVerifier.run_1d(data, grid, kg, tau, Equation.DAMPED_EQ1)
        undamped = FDTDVerifier.run_1d(data, grid, kg, tau, Equation.UNDAMPED_EQ13)
        stride = int(round(CONVERGENCE_DX[0] / dx))
        difference = FDTDVerifier.compare(_coarse(damped, stride), _coarse(undamped.to_temperature(), stride))
        differences.append(difference.linf_error)
        steps.append(grid.dt)
    orders = _orders(differences, steps)
    return CaseResult(
        case="substitution_identity",
        norms={f"linf_dx{dx:g}": d for dx, d in zip(CONVERGENCE_DX, differences)},
        convergence_ratios=orders,
        passed=all(order >= ORDER_MIN for order in orders),
    )


def case_energy_conservation(fault: Optional[str] = None) -> CaseResult:
    """Relative change of the discrete leapfrog energy per step over 10^3 steps."""
    kg = standard_kg(1.0)
    data = InitialData(
        phi=GaussianProfile(width=1.0, amplitude=1.0),
        psi=GaussianProfile(width=0.5, amplitude=0.3),
    )
    dx = 0.1
    n_steps = 1000
    grid = GridSpec1D(x_min=-110.0, x_max=110.0, nx=2201, dt=0.9 * dx / kg.v, n_steps=n_steps)
    state = FDTDVerifier.init_scheme(data, grid, kg, math.inf, Equation.UNDAMPED_EQ13)
    energy = FDTDVerifier.discrete_energy(state, grid, kg)
    initial = energy
    worst = 0.0
    while state.step_index < n_steps:
        state = FDTDVerifier.step(state, grid, kg, math.inf)
        current = FDTDVerifier.discrete_energy(state, grid, kg)
        worst = max(worst, abs(current - energy) / abs(initial))
        energy = current
    return CaseResult(
        case="energy_conservation",
        norms={"max_rel_drift_per_step": worst, "total_rel_drift": abs(energy - initial) / abs(initial)},
        passed=worst < 1e-10,
    )


# ============================================================================
# BESSEL CASE
# ============================================================================

def power_series_bessel(x: float, order: int, modified: bool = False, dps: int = 60) -> float:
    """J_order or I_order (order 0 or 1) summed term by term in mpmath."""
    with mpmath.workdps(dps):
        half = mpmath.mpf(x) / 2
        sign = 1 if modified else -1
        term = half**order / mpmath.factorial(order)
        total = mpmath.mpf(0)
        k = 0
        eps = mpmath.mpf(10) ** (-dps + 5)
        while True:
            total += term
            k += 1
            term *= sign * half * half / (k * (k + order))
            if abs(term) < eps * max(abs(total), 1) and k > abs(x):
                break
        return float(total)


def case_bessel_accuracy(fault: Optional[str] = None) -> CaseResult:
    """J0, J1 against the power series on |x| <= 50 and J0' = -J1 at difference order 2."""
    x = np.linspace(-50.0, 50.0, 1000)
    j0_ref = np.array([power_series_bessel(v, 0) for v in x])
    j1_ref = np.array([power_series_bessel(v, 1) for v in x])
    i0_ref = np.array([power_series_bessel(v, 0, modified=True) for v in x])
    i1_ref = np.array([power_series_bessel(v, 1, modified=True) for v in x])
    scale = np.exp(np.abs(x))
    norms = {
        "j0_max_abs_error": float(np.max(np.abs(bessel_j0(x) - j0_ref))),
        "j1_max_abs_error": float(np.max(np.abs(bessel_j1(x) - j1_ref))),
        "i0_max_scaled_error": float(np.max(np.abs(bessel_i0(x) - i0_ref) / scale)),
        "i1_max_scaled_error": float(np.max(np.abs(bessel_i1(x) - i1_ref) / scale)),
    }

    probes = np.linspace(-20.0, 20.0, 41)
    steps = [1e-2, 5e-3]
    errors = [
        float(np.max(np.abs((bessel_j0(probes + h) - bessel_j0(probes - h)) / (2.0 * h) + bessel_j1(probes))))
        for h in steps
    ]
    orders = _orders(errors, steps)
    passed = all(value <= 1e-12 for value in norms.values()) and orders[0] >= ORDER_MIN
    return CaseResult(case="bessel_accuracy", norms=norms, convergence_ratios=orders, passed=passed)


# ============================================================================
# DRIVER
# ============================================================================

CASES: Dict[str, Callable[[Optional[str]], CaseResult]] = {
    "green1d_spectral": case_green1d_spectral,
    "green3d_three_way": case_green3d_three_way,
    "causality": case_causality,
    "q_zero_limits": case_q_zero_limits,
    "uniform_data_ode": case_uniform_data_ode,
    "fdtd_convergence": case_fdtd_convergence,
    "substitution_identity": case_substitution_identity,
    "energy_conservation": case_energy_conservation,
    "bessel_accuracy": case_bessel_accuracy,
}


def run_cases(names: Optional[Iterable[str]] = None, fault: Optional[str] = None) -> List[CaseResult]:
    """Run the named cases (all by default) in suite order."""
    if fault is not None and fault not in FAULTS:
        raise ConfigurationError(f"unknown fault {fault!r}; known: {', '.join(FAULTS)}")
    selected = list(CASES) if names is None else list(names)
    unknown = [name for name in selected if name not in CASES]
    if unknown:
        raise ConfigurationError(f"unknown verification case(s): {', '.join(unknown)}")

    results = []
    for name in selected:
        try:
            result = CASES[name](fault)
        except KGTError as e:
            logger.error(f"❌ {name} raised {type(e).__name__}: {e}")
            result = CaseResult(case=name, passed=False, detail=f"{type(e).__name__}: {e}")
        logger.info(f"{'✅' if result.passed else '❌'} {name}: {result.norms}")
        results.append(result)
    return results
