"""
Explicit leapfrog solver for the damped equation

    T_tt + gamma T_t + mu² T = v² T_xx,   gamma = 1/tau, mu² = q² + 1/(4 tau²)

and the undamped form (gamma = 0, mu² = q²), on a uniform grid with
Dirichlet-zero ends. Radial 3D runs evolve w = r u with the same stencil.
"""

import logging
import math
from typing import Tuple

import numpy as np

from kgt.errors import (
    ConeReachedBoundaryError,
    ConfigurationError,
    DomainError,
    GridMismatchError,
    PreconditionError,
)
from kgt.models import (
    CompareResult,
    Equation,
    FieldGrid,
    GridSpec1D,
    InitialData,
    KGParams,
    SchemeState,
)

logger = logging.getLogger(__name__)

CFL_SLACK = 1e-12
GRID_RTOL = 1e-12


class FDTDVerifier:
    """Second-order finite-difference oracle for the convolution solutions."""

    @staticmethod
    def _coefficients(kg: KGParams, tau: float, equation: Equation) -> Tuple[float, float]:
        """(gamma, mu²)"""
        if equation == Equation.UNDAMPED_EQ13:
            return 0.0, kg.q_sq
        if not tau > 0:
            raise DomainError(f"relaxation time must be positive, got {tau!r}")
        gamma = 1.0 / tau
        return gamma, kg.q_sq + 0.25 * gamma * gamma

    @staticmethod
    def _second_difference(u: np.ndarray, dx: float) -> np.ndarray:
        lap = np.zeros_like(u)
        lap[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (dx * dx)
        return lap

    @staticmethod
    def _check_cone(state: SchemeState, grid: GridSpec1D, kg: KGParams) -> None:
        if state.support is None:
            return
        t = state.step_index * grid.dt
        lo, hi = state.support
        reach = kg.v * t
        escaped = hi + reach > grid.x_max
        if not state.radial:
            escaped = escaped or lo - reach < grid.x_min
        if escaped:
            raise ConeReachedBoundaryError(state.step_index, t)

    @staticmethod
    def init_scheme(data: InitialData, grid: GridSpec1D, kg: KGParams, tau: float,
                    equation: Equation, radial: bool = False) -> SchemeState:
        """
        Time levels 0 and 1 from a second-order Taylor start.

        The damped equation is started from T(0) = phi, T_t(0) = psi - phi/(2 tau),
        so that T = exp(-t/2tau) u for the same data.
        """
        cfl = grid.cfl(kg.v)
        if cfl > 1.0 + CFL_SLACK:
            raise ConfigurationError(f"CFL number v dt/dx = {cfl:.6g} exceeds 1")
        gamma, mu_sq = FDTDVerifier._coefficients(kg, tau, equation)

        x = grid.positions
        if radial:
            if abs(grid.x_min) > GRID_RTOL * grid.dx:
                raise PreconditionError(f"radial grid must start at r = 0, got {grid.x_min!r}")
            if not data.is_radially_symmetric():
                raise PreconditionError("radial runs need radially symmetric initial data")
        u0 = np.asarray(data.phi(x), dtype=float)
        ut0 = np.asarray(data.psi(x), dtype=float) - 0.5 * gamma * u0
        if radial:
            u0, ut0 = x * u0, x * ut0

        dt = grid.dt
        accel = kg.v**2 * FDTDVerifier._second_difference(u0, grid.dx) - mu_sq * u0 - gamma * ut0
        u1 = u0 + dt * ut0 + 0.5 * dt * dt * accel

        support = data.support
        if support is None:
            logger.warning("⚠️ initial data has unbounded support: values within v t of a Dirichlet end are not exact")
        state = SchemeState(
            u_prev=u0, u_curr=u1, step_index=1, equation=equation, radial=radial, support=support
        )
        FDTDVerifier._check_cone(state, grid, kg)
        return state

    @staticmethod
    def step(state: SchemeState, grid: GridSpec1D, kg: KGParams, tau: float) -> SchemeState:
        """One leapfrog step with the damping term centred in time."""
        gamma, mu_sq = FDTDVerifier._coefficients(kg, tau, state.equation)
        dt = grid.dt
        u, u_prev = state.u_curr, state.u_prev
        lap = FDTDVerifier._second_difference(u, grid.dx)
        half_damping = 0.5 * gamma * dt
        u_next = (
            2.0 * u - (1.0 - half_damping) * u_prev + dt * dt * (kg.v**2 * lap - mu_sq * u)
        ) / (1.0 + half_damping)
        u_next[0] = 0.0
        u_next[-1] = 0.0
        new_state = SchemeState(
            u_prev=u,
            u_curr=u_next,
            step_index=state.step_index + 1,
            equation=state.equation,
            radial=state.radial,
            support=state.support,
        )
        FDTDVerifier._check_cone(new_state, grid, kg)
        return new_state

    @staticmethod
    def _advance(data: InitialData, grid: GridSpec1D, kg: KGParams, tau: float,
                 equation: Equation, radial: bool) -> np.ndarray:
        state = FDTDVerifier.init_scheme(data, grid, kg, tau, equation, radial)
        if grid.n_steps == 0:
            return state.u_prev
        while state.step_index < grid.n_steps:
            state = FDTDVerifier.step(state, grid, kg, tau)
        logger.info(
            f"FDTD {equation.value}{' radial' if radial else ''}: {grid.n_steps} steps, "
            f"nx={grid.nx}, CFL={grid.cfl(kg.v):.3f}, t={grid.t_final:.6g} s"
        )
        return state.u_curr

    @staticmethod
    def _field(values: np.ndarray, grid: GridSpec1D, kg: KGParams, tau: float,
               equation: Equation, dimension: int) -> FieldGrid:
        return FieldGrid(
            origin=grid.x_min,
            spacing=grid.dx,
            values=values,
            time=grid.t_final,
            kind="temperature" if equation == Equation.DAMPED_EQ1 else "u_field",
            dimension=dimension,
            v=kg.v,
            q_sq=kg.q_sq,
            tau=tau,
        )

    @staticmethod
    def run_1d(data: InitialData, grid: GridSpec1D, kg: KGParams, tau: float,
               equation: Equation) -> FieldGrid:
        """Field after grid.n_steps steps (T for the damped equation, u otherwise)."""
        values = FDTDVerifier._advance(data, grid, kg, tau, equation, radial=False)
        return FDTDVerifier._field(values, grid, kg, tau, equation, dimension=1)

    @staticmethod
    def run_radial_3d(data: InitialData, grid: GridSpec1D, kg: KGParams, tau: float,
                      equation: Equation) -> FieldGrid:
        """Radial 3D run through w = r u; the r = 0 value comes from an even parabola fit."""
        w = FDTDVerifier._advance(data, grid, kg, tau, equation, radial=True)
        r = grid.positions
        u = np.empty_like(w)
        u[1:] = w[1:] / r[1:]
        r1, r2 = r[1], r[2]
        u[0] = (r2 * r2 * u[1] - r1 * r1 * u[2]) / (r2 * r2 - r1 * r1)
        return FDTDVerifier._field(u, grid, kg, tau, equation, dimension=3)

    @staticmethod
    def discrete_energy(state: SchemeState, grid: GridSpec1D, kg: KGParams) -> float:
        """Energy conserved by the undamped leapfrog between levels n and n+1."""
        u_next, u = state.u_curr, state.u_prev
        dx, dt = grid.dx, grid.dt
        kinetic = np.sum((u_next - u) ** 2) / (2.0 * dt * dt)
        strain = 0.5 * kg.v**2 * np.sum(np.diff(u_next) * np.diff(u)) / (dx * dx)
        mass = 0.5 * kg.q_sq * np.sum(u_next * u)
        return float((kinetic + strain + mass) * dx)

    @staticmethod
    def compare(analytic: FieldGrid, numeric: FieldGrid) -> CompareResult:
        """Discrete L2 (spacing-weighted), L-infinity and relative L2 errors."""
        same = (
            len(analytic.values) == len(numeric.values)
            and math.isclose(analytic.spacing, numeric.spacing, rel_tol=GRID_RTOL)
            and math.isclose(analytic.origin, numeric.origin, rel_tol=GRID_RTOL, abs_tol=GRID_RTOL * analytic.spacing)
            and math.isclose(analytic.time, numeric.time, rel_tol=GRID_RTOL, abs_tol=1e-300)
        )
        if not same:
            raise GridMismatchError(
                f"grids differ: n={len(analytic.values)}/{len(numeric.values)}, "
                f"origin={analytic.origin!r}/{numeric.origin!r}, spacing={analytic.spacing!r}/{numeric.spacing!r}, "
                f"time={analytic.time!r}/{numeric.time!r}"
            )
        error = analytic.values - numeric.values
        l2 = math.sqrt(float(np.sum(error * error)) * analytic.spacing)
        norm = math.sqrt(float(np.sum(analytic.values**2)) * analytic.spacing)
        if norm > 0:
            relative = l2 / norm
        else:
            relative = 0.0 if l2 == 0 else math.inf
        linf = float(np.max(np.abs(error))) if len(error) else 0.0
        return CompareResult(l2_error=l2, linf_error=linf, l2_relative=relative)
