"""
Initial-value problem u_tt - v² Δu + q² u = 0, u(0) = phi, u_t(0) = psi,
solved by convolution with the Green functions, and the damped
temperature T = exp(-t/2tau) u.

1D (y = x + v t xi, xi in [-1, 1]):
    u = (phi(x+vt) + phi(x-vt))/2 - (q² t²/2) int J1(z)/z phi dxi
        + (t/2) int J0(z) psi dxi,                z = |q| t sqrt(1 - xi²)

3D, radial data (rho = v t eta, eta in [0, 1], M_rho the spherical mean):
    psi part  t M_vt[psi] - q² t³ int J1(z)/z eta² M_{vt eta}[psi] deta
    phi part  d/dt(t M_vt[phi]) - (q² t²/2) M_vt[phi]
              - q² |q²| t⁴ int h(z) eta² M_{vt eta}[phi] deta
"""

import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from kgt.cache import rule_cache
from kgt.calculations.green_functions import kernel_h, kernel_j0, kernel_j1c
from kgt.calculations.physical_parameters import PhysicalParameters
from kgt.config import settings
from kgt.errors import DomainError, PreconditionError, QuadratureError
from kgt.models import (
    FieldGrid,
    InitialData,
    KGParams,
    PhysicalParams,
    SampleGrid,
    SphereQuadrature,
)

logger = logging.getLogger(__name__)

# below this fraction of v t the Kirchhoff term switches to its r -> 0 form
KIRCHHOFF_ORIGIN_REL = 1e-6
QUAD_LIMIT = 200


def _quad(integrand: Callable[[float], float], lo: float, hi: float,
          points: Sequence[float], tol: float, scale: float, label: str) -> float:
    """scipy quad with interior breakpoints; non-convergence raises QuadratureError."""
    inner = sorted({p for p in points if lo < p < hi})
    result = integrate.quad(
        integrand, lo, hi,
        points=inner or None,
        epsabs=tol * max(scale, np.finfo(float).tiny),
        epsrel=tol,
        limit=max(QUAD_LIMIT, 4 * len(inner) + 50),
        full_output=1,
    )
    value, error = result[0], result[1]
    if len(result) > 3:
        raise QuadratureError(
            f"{label} integral did not converge on [{lo:.6g}, {hi:.6g}]: {result[3]}",
            achieved=error,
        )
    return value


def _clip(support, lo: float, hi: float) -> Optional[Tuple[float, float]]:
    """Intersection of [lo, hi] with a profile support; None when empty."""
    if support is not None:
        lo, hi = max(lo, support[0]), min(hi, support[1])
    return (lo, hi) if lo < hi else None


class Evolution:
    """Green-function propagation of initial data."""

    @staticmethod
    def _band_edges(profile, r: float, radius: float) -> np.ndarray:
        """Edges in cos(theta) where |x + R w| crosses a profile kink or support end."""
        edges = [-1.0, 1.0]
        if r > 0.0 and radius > 0.0:
            kinks = list(profile.breakpoints) + list(profile.support or ())
            for b in kinks:
                mu = (b * b - r * r - radius * radius) / (2.0 * r * radius)
                if -1.0 < mu < 1.0:
                    edges.append(mu)
        return np.unique(edges)

    @staticmethod
    def spherical_mean(profile, r: float, radius, sphere: Optional[SphereQuadrature] = None):
        """
        Mean of the radial profile f(|y|) over the sphere |y - x| = radius, |x| = r.

        The cos(theta) range is cut into bands at every kink of f along the
        sphere and the product rule is applied on each band, so jumps and
        kinks of rectangle and tabulated data cost no accuracy.
        ``radius`` may be an array; the result then has its shape.
        """
        sphere = sphere or SphereQuadrature.from_settings()
        mu_ref, w_ref, azimuth = rule_cache.sphere_rule(sphere.n_theta, sphere.n_phi)
        scalar = np.ndim(radius) == 0
        radii = np.atleast_1d(np.asarray(radius, dtype=float))
        means = np.empty_like(radii)
        for i, big_r in enumerate(radii):
            total = 0.0
            edges = Evolution._band_edges(profile, r, float(big_r))
            for lo, hi in zip(edges[:-1], edges[1:]):
                half = 0.5 * (hi - lo)
                mu = 0.5 * (hi + lo) + half * mu_ref
                ring = big_r * np.sqrt(np.maximum(1.0 - mu * mu, 0.0))
                # y = x + R w with x = (0, 0, r)
                y1 = ring[:, None] * azimuth[None, :, 0]
                y2 = ring[:, None] * azimuth[None, :, 1]
                y3 = (r + big_r * mu)[:, None]
                values = profile(np.sqrt(y1 * y1 + y2 * y2 + y3 * y3))
                total += half * float(w_ref @ values.mean(axis=1))
            means[i] = 0.5 * total
        return float(means[0]) if scalar else means

    # ========================================================================
    # ONE DIMENSION
    # ========================================================================

    @staticmethod
    def solve_u_1d(data: InitialData, x: float, t: float, kg: KGParams,
                   quad_tol: Optional[float] = None) -> float:
        """u(x, t) for the undamped equation in one dimension."""
        if t < 0:
            raise DomainError(f"solve_u_1d needs t >= 0, got {t!r}")
        if t == 0:
            return float(data.phi(x))
        tol = settings.QUAD_TOL if quad_tol is None else quad_tol
        vt = kg.v * t
        kappa_t = kg.q_abs * t

        def xi_window(profile) -> Optional[Tuple[float, float, List[float]]]:
            support = profile.support
            if support is not None:
                support = ((support[0] - x) / vt, (support[1] - x) / vt)
            window = _clip(support, -1.0, 1.0)
            if window is None:
                return None
            points = [(b - x) / vt for b in profile.breakpoints]
            return window[0], window[1], points

        def z_of(xi: float) -> float:
            return kappa_t * math.sqrt(max(1.0 - xi * xi, 0.0))

        u = 0.0
        phi = data.phi
        if not phi.is_zero:
            u += 0.5 * float(phi(x + vt) + phi(x - vt))
            window = xi_window(phi)
            if kg.q_sq != 0.0 and window is not None:
                lo, hi, points = window
                integral = _quad(
                    lambda xi: float(kernel_j1c(z_of(xi), kg.oscillatory)[0] * phi(x + vt * xi)),
                    lo, hi, points, tol, phi.max_abs(), "phi",
                )
                u -= 0.5 * kg.q_sq * t * t * integral

        psi = data.psi
        if not psi.is_zero:
            window = xi_window(psi)
            if window is not None:
                lo, hi, points = window
                integral = _quad(
                    lambda xi: float(kernel_j0(z_of(xi), kg.oscillatory) * psi(x + vt * xi)),
                    lo, hi, points, tol, psi.max_abs(), "psi",
                )
                u += 0.5 * t * integral
        return u

    # ========================================================================
    # THREE DIMENSIONS (RADIAL DATA)
    # ========================================================================

    @staticmethod
    def _eta_window(profile, r: float, vt: float) -> Optional[Tuple[float, float, List[float]]]:
        """eta range where M_{vt eta}[f](r) can be non-zero, with kink locations."""
        support = profile.support
        lo, hi = 0.0, 1.0
        if support is not None:
            outer = max(abs(support[0]), abs(support[1]))
            lo, hi = max(lo, (r - outer) / vt), min(hi, (r + outer) / vt)
        if not lo < hi:
            return None
        points = []
        for b in list(profile.breakpoints) + list(support or ()):
            points.extend([abs(r - abs(b)) / vt, (r + abs(b)) / vt])
        return lo, hi, points

    @staticmethod
    def _kirchhoff(phi, r: float, vt: float) -> float:
        """d/dt (t M_vt[phi])(r) for radial phi."""
        if r > KIRCHHOFF_ORIGIN_REL * vt:
            return float((r + vt) * phi(r + vt) + (r - vt) * phi(abs(r - vt))) / (2.0 * r)
        return float(phi(vt) + vt * phi.derivative(vt))

    @staticmethod
    def solve_u_3d(data: InitialData, r: float, t: float, kg: KGParams,
                   sphere: Optional[SphereQuadrature] = None,
                   quad_tol: Optional[float] = None) -> float:
        """u(r, t) for radially symmetric data; t = 0 returns phi(r)."""
        if t < 0 or r < 0:
            raise DomainError(f"solve_u_3d needs t >= 0 and r >= 0, got r={r!r}, t={t!r}")
        if not data.is_radially_symmetric():
            raise PreconditionError("solve_u_3d needs radially symmetric (even, centred) initial data")
        if t == 0:
            return float(data.phi(r))
        sphere = sphere or SphereQuadrature.from_settings()
        tol = settings.QUAD_TOL if quad_tol is None else quad_tol
        vt = kg.v * t
        kappa_t = kg.q_abs * t
        mean = Evolution.spherical_mean

        def z_of(eta: float) -> float:
            return kappa_t * math.sqrt(max(1.0 - eta * eta, 0.0))

        def interior(profile, kernel, label: str) -> float:
            window = Evolution._eta_window(profile, r, vt)
            if window is None:
                return 0.0
            lo, hi, points = window
            return _quad(
                lambda eta: float(kernel(z_of(eta), kg.oscillatory)[0]) * eta * eta
                * mean(profile, r, vt * eta, sphere),
                lo, hi, points, tol, profile.max_abs(), label,
            )

        u = 0.0
        phi = data.phi
        if not phi.is_zero:
            u += Evolution._kirchhoff(phi, r, vt)
            if kg.q_sq != 0.0:
                u -= 0.5 * kg.q_sq * t * t * mean(phi, r, vt, sphere)
                u -= kg.q_sq * abs(kg.q_sq) * t**4 * interior(phi, kernel_h, "phi")

        psi = data.psi
        if not psi.is_zero:
            u += t * mean(psi, r, vt, sphere)
            if kg.q_sq != 0.0:
                u -= kg.q_sq * t**3 * interior(psi, kernel_j1c, "psi")
        return u

    # ========================================================================
    # TEMPERATURE AND GRIDS
    # ========================================================================

    @staticmethod
    def temperature_from_u(u, t: float, tau: float):
        """T = exp(-t/(2 tau)) u; tau = inf leaves u unchanged."""
        if not tau > 0:
            raise DomainError(f"relaxation time must be positive, got {tau!r}")
        if t < 0:
            raise DomainError(f"temperature_from_u needs t >= 0, got {t!r}")
        factor = math.exp(-t / (2.0 * tau))
        if np.ndim(u) == 0:
            return factor * float(u)
        return factor * np.asarray(u, dtype=float)

    @staticmethod
    def evolve_u_grid(data: InitialData, grid: SampleGrid, t: float, kg: KGParams,
                      tau: float = math.inf,
                      quad_tol: Optional[float] = None,
                      sphere: Optional[SphereQuadrature] = None) -> FieldGrid:
        """u on every grid point; points are evaluated in order, one quadrature each."""
        positions = grid.positions
        if grid.dimension == 1:
            values = [Evolution.solve_u_1d(data, float(x), t, kg, quad_tol) for x in positions]
        else:
            values = [Evolution.solve_u_3d(data, float(r), t, kg, sphere, quad_tol) for r in positions]
        logger.info(f"evolved {grid.n} points in {grid.dimension}D to t={t:.6g} s")
        return FieldGrid(
            origin=grid.origin,
            spacing=grid.spacing,
            values=values,
            time=t,
            kind="u_field",
            dimension=grid.dimension,
            v=kg.v,
            q_sq=kg.q_sq,
            tau=tau,
        )

    @staticmethod
    def evolve_temperature_grid(data: InitialData, grid: SampleGrid, t: float, p: PhysicalParams,
                                quad_tol: Optional[float] = None,
                                sphere: Optional[SphereQuadrature] = None) -> FieldGrid:
        """Temperature field of the damped equation from physical parameters."""
        kg = PhysicalParameters.kg_params(p)
        tau = PhysicalParameters.relaxation_time(p)
        return Evolution.evolve_u_grid(data, grid, t, kg, tau, quad_tol, sphere).to_temperature()
