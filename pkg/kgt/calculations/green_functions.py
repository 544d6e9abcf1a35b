"""
Green functions of u_tt - v² Δu + q² u = 0 in one and three dimensions.

Closed forms (1D: J0 inside the cone; 3D: a cone layer plus a J1 interior
term) and two spectral oracles that invert the Fourier-space solution
sin(t w)/w, w = sqrt(v²k² + q²), numerically.

For q² < 0 the interior kernels continue analytically: J0 -> I0 and
J1(z)/z -> I1(z)/z with z = sqrt(|q²|) * sqrt(t² - r²/v²). Writing the 3D
regular part as -(q²/(4 pi v³)) * J1(z)/z makes the continuation a pure
kernel swap: at q = i|q| one has -q J1(q s/v)/(4 pi v² s) = +|q| I1(|q| s/v)/(4 pi v² s).
"""

import logging
import math
from typing import Dict, Optional, Tuple

import numpy as np

from kgt.cache import rule_cache
from kgt.calculations.special_functions import bessel_i0, bessel_i1, bessel_j0, bessel_j1
from kgt.config import settings
from kgt.errors import DomainError, PreconditionError, QuadratureError
from kgt.models import ConeRegion, ConeTag, GreenEval3D, KGParams, QuadratureSpec

logger = logging.getLogger(__name__)

# below these arguments the kernels are summed from their power series
J1C_SERIES_LIMIT = 0.5
H_SERIES_LIMIT = 1.0


# ============================================================================
# INTERIOR KERNELS
# ============================================================================

def _series(z: np.ndarray, sign: float, first: int, terms: int, coefficient) -> np.ndarray:
    quarter_sq = (z / 2.0) ** 2
    total = np.zeros_like(z)
    power = np.ones_like(z)
    for k in range(first, first + terms):
        total = total + sign**k * coefficient(k) * power
        power = power * quarter_sq
    return total


def kernel_j0(z, oscillatory: bool):
    """J0(z) for q² >= 0, I0(z) otherwise."""
    return bessel_j0(z) if oscillatory else bessel_i0(z)


def kernel_j1c(z, oscillatory: bool) -> np.ndarray:
    """J1(z)/z (or I1(z)/z), equal to 1/2 at z = 0."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    out = np.empty_like(z)
    sign = -1.0 if oscillatory else 1.0
    small = z < J1C_SERIES_LIMIT
    if np.any(small):
        out[small] = _series(
            z[small], sign, 0, 10, lambda k: 1.0 / (2.0 * math.factorial(k) * math.factorial(k + 1))
        )
    if np.any(~small):
        zz = z[~small]
        j1 = bessel_j1(zz) if oscillatory else bessel_i1(zz)
        out[~small] = j1 / zz
    return out


def kernel_h(z, oscillatory: bool) -> np.ndarray:
    """(z J0(z) - 2 J1(z))/z³ (or the I analogue); -1/8 (+1/8) at z = 0."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    out = np.empty_like(z)
    sign = -1.0 if oscillatory else 1.0
    small = z < H_SERIES_LIMIT
    if np.any(small):
        # sum_{k>=1} sign^k k (z/2)^(2k-2) / (4 k! (k+1)!)
        out[small] = _series(
            z[small], sign, 1, 14,
            lambda k: k / (4.0 * math.factorial(k) * math.factorial(k + 1)),
        )
    if np.any(~small):
        zz = z[~small]
        if oscillatory:
            out[~small] = (zz * bessel_j0(zz) - 2.0 * bessel_j1(zz)) / zz**3
        else:
            out[~small] = (zz * bessel_i0(zz) - 2.0 * bessel_i1(zz)) / zz**3
    return out


def _scalar_or_array(values: np.ndarray, scalar: bool):
    return float(values[0]) if scalar else values


# ============================================================================
# CLOSED FORMS
# ============================================================================

class GreenFunctions:
    """Closed-form and spectral Green functions of the undamped equation."""

    @staticmethod
    def cone_distance(r, t: float, kg: KGParams):
        """t² - r²/v², in s²."""
        r = np.asarray(r, dtype=float)
        return t * t - r * r / (kg.v * kg.v)

    @staticmethod
    def _cone_eps(t: float, cone_eps: Optional[float]) -> float:
        return settings.CONE_EPS_REL * t * t if cone_eps is None else cone_eps

    @staticmethod
    def classify(r: float, t: float, kg: KGParams, cone_eps: Optional[float] = None) -> ConeRegion:
        """Position of (r, t) relative to the wave cone r = v t."""
        if t < 0 or r < 0:
            raise DomainError(f"classify needs t >= 0 and r >= 0, got r={r!r}, t={t!r}")
        eps = GreenFunctions._cone_eps(t, cone_eps)
        distance = float(GreenFunctions.cone_distance(r, t, kg))
        if distance > eps:
            tag = ConeTag.INTERIOR
        elif distance < -eps:
            tag = ConeTag.EXTERIOR
        else:
            tag = ConeTag.ON_CONE
        return ConeRegion(tag=tag, cone_distance=distance)

    @staticmethod
    def _inside(r, t: float, kg: KGParams) -> Tuple[np.ndarray, np.ndarray]:
        """(inside-or-on-cone mask, z = |q| sqrt(max(t² - r²/v², 0)))."""
        distance = np.atleast_1d(GreenFunctions.cone_distance(np.abs(r), t, kg))
        inside = distance >= -GreenFunctions._cone_eps(t, None)
        z = kg.q_abs * np.sqrt(np.maximum(distance, 0.0))
        return inside, z

    @staticmethod
    def green_1d(x, t: float, kg: KGParams):
        """
        G(x, t) = J0(q sqrt(t² - x²/v²)) / (2v) for |x| <= v t, exactly 0 outside.
        """
        if t < 0:
            raise DomainError(f"green_1d needs t >= 0, got {t!r}")
        scalar = np.ndim(x) == 0
        inside, z = GreenFunctions._inside(x, t, kg)
        values = np.zeros_like(z)
        if np.any(inside):
            values[inside] = kernel_j0(z[inside], kg.oscillatory) / (2.0 * kg.v)
        return _scalar_or_array(values, scalar)

    @staticmethod
    def green_1d_dt(x, t: float, kg: KGParams):
        """dG/dt inside the cone: -(q² t/(2v)) J1(z)/z (interior part only)."""
        if t < 0:
            raise DomainError(f"green_1d_dt needs t >= 0, got {t!r}")
        scalar = np.ndim(x) == 0
        inside, z = GreenFunctions._inside(x, t, kg)
        values = np.zeros_like(z)
        if np.any(inside):
            values[inside] = -(kg.q_sq * t / (2.0 * kg.v)) * kernel_j1c(z[inside], kg.oscillatory)
        return _scalar_or_array(values + 0.0, scalar)

    @staticmethod
    def green_3d_regular(r, t: float, kg: KGParams):
        """Interior term -(q²/(4 pi v³)) J1(z)/z; exactly 0 outside the cone."""
        if t <= 0:
            raise DomainError(f"green_3d needs t > 0, got {t!r}")
        scalar = np.ndim(r) == 0
        inside, z = GreenFunctions._inside(r, t, kg)
        values = np.zeros_like(z)
        if np.any(inside):
            scale = -kg.q_sq / (4.0 * math.pi * kg.v**3)
            values[inside] = scale * kernel_j1c(z[inside], kg.oscillatory)
        return _scalar_or_array(values + 0.0, scalar)

    @staticmethod
    def green_3d_regular_dt(r, t: float, kg: KGParams):
        """Time derivative of the interior term: -(q² |q²| t/(4 pi v³)) h(z)."""
        if t <= 0:
            raise DomainError(f"green_3d needs t > 0, got {t!r}")
        scalar = np.ndim(r) == 0
        inside, z = GreenFunctions._inside(r, t, kg)
        values = np.zeros_like(z)
        if np.any(inside):
            scale = -kg.q_sq * abs(kg.q_sq) * t / (4.0 * math.pi * kg.v**3)
            values[inside] = scale * kernel_h(z[inside], kg.oscillatory)
        return _scalar_or_array(values + 0.0, scalar)

    @staticmethod
    def green_3d(r: float, t: float, kg: KGParams) -> GreenEval3D:
        """
        Regular interior value and the cone-layer coefficient.

        The layer delta(v²t² - r²)/(2 pi v) = delta(r - v t)/(4 pi v² t) acts on a
        test function f as t * M_{vt}[f], hence the coefficient t.
        """
        if t <= 0:
            raise DomainError(f"green_3d needs t > 0, got {t!r}")
        region = GreenFunctions.classify(r, t, kg)
        regular = GreenFunctions.green_3d_regular(r, t, kg)
        return GreenEval3D(regular=regular, cone_layer_coefficient=t, region=region.tag)

    @staticmethod
    def green_3d_from_1d(r: float, t: float, kg: KGParams, h: float) -> float:
        """
        Regular 3D part as -(1/(2 pi r)) dG1/dr by central differences on green_1d.

        For r < h the r -> 0 limit -(1/(2 pi)) d²G1/dr² is used.
        """
        if r < 0 or t <= 0 or h <= 0:
            raise DomainError(f"green_3d_from_1d needs r >= 0, t > 0, h > 0 (r={r!r}, t={t!r}, h={h!r})")
        if kg.v * t - r <= h:
            raise PreconditionError(
                f"point r={r:.6g} is within h={h:.3g} of the cone r=vt={kg.v * t:.6g}"
            )
        g = GreenFunctions.green_1d
        if r < h:
            second = (g(h, t, kg) - 2.0 * g(0.0, t, kg) + g(-h, t, kg)) / (h * h)
            return -second / (2.0 * math.pi)
        slope = (g(r + h, t, kg) - g(r - h, t, kg)) / (2.0 * h)
        return -slope / (2.0 * math.pi * r)

    @staticmethod
    def fourier_mode_solution(k, t: float, kg: KGParams):
        """
        sin(t w)/w with w² = v²k² + q²; t at w = 0 and sinh(t|w|)/|w| for w² < 0.
        """
        scalar = np.ndim(k) == 0
        k = np.atleast_1d(np.asarray(k, dtype=float))
        w_sq = kg.v * kg.v * k * k + kg.q_sq
        root = np.sqrt(np.abs(w_sq))
        oscillating = t * np.sinc(t * root / math.pi)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            growing = np.where(t * root > 1e-8, np.sinh(t * root) / np.where(root > 0, root, 1.0), t)
        return _scalar_or_array(np.where(w_sq >= 0, oscillating, growing), scalar)

    # ========================================================================
    # SPECTRAL ORACLES
    # ========================================================================

    @staticmethod
    def _free_cosine_transform(x: np.ndarray, t: float, kg: KGParams) -> np.ndarray:
        """int_0^inf sin(v k t)/(v k) cos(k x) dk = pi/(2v) H(vt - |x|), pi/(4v) on the cone."""
        eps = GreenFunctions._cone_eps(t, None)
        distance = GreenFunctions.cone_distance(np.abs(x), t, kg)
        full = math.pi / (2.0 * kg.v)
        return np.where(distance > eps, full, np.where(distance < -eps, 0.0, full / 2.0))

    @staticmethod
    def _cosine_transform(x: np.ndarray, t: float, kg: KGParams,
                          spec: QuadratureSpec) -> Tuple[np.ndarray, float]:
        """
        C(x) = int_0^inf G(k, t) cos(k x) dk with the q = 0 kernel split off.

        The remainder decays like k^-2 and is integrated on [0, k_max];
        the panel count doubles until successive results agree to spec.tol.
        """
        k_max = spec.k_max
        if k_max is None:
            k_max = settings.SPECTRAL_K_MAX_FACTOR * max(1.0, kg.q_abs * t) / (kg.v * t)
        tol = spec.tol * math.pi / (2.0 * kg.v)

        def integrate(n_panels: int) -> np.ndarray:
            nodes, weights = rule_cache.composite_rule(0.0, k_max, n_panels)
            remainder = GreenFunctions.fourier_mode_solution(nodes, t, kg) - t * np.sinc(kg.v * nodes * t / math.pi)
            weighted = weights * remainder
            return np.array([np.dot(weighted, np.cos(nodes * xi)) for xi in x])

        n_panels = spec.n_panels
        current = integrate(n_panels)
        error = math.inf
        for _ in range(spec.max_refinements):
            n_panels *= 2
            previous, current = current, integrate(n_panels)
            error = float(np.max(np.abs(current - previous)))
            if error <= tol:
                break
        else:
            raise QuadratureError(
                f"spectral quadrature did not converge: error {error:.3g} > {tol:.3g} "
                f"after {n_panels} panels",
                achieved=error,
            )
        logger.debug(f"cosine transform: {n_panels} panels on [0, {k_max:.6g}], error {error:.3g}")
        return current + GreenFunctions._free_cosine_transform(x, t, kg), error

    @staticmethod
    def spectral_green_1d(x, t: float, kg: KGParams,
                          spec: Optional[QuadratureSpec] = None) -> Tuple[object, float]:
        """(1/pi) int_0^inf G(k, t) cos(k x) dk; returns (value, error estimate)."""
        if t <= 0:
            raise DomainError(f"spectral_green_1d needs t > 0, got {t!r}")
        spec = spec or QuadratureSpec.from_settings()
        scalar = np.ndim(x) == 0
        values, error = GreenFunctions._cosine_transform(np.atleast_1d(np.asarray(x, dtype=float)), t, kg, spec)
        return _scalar_or_array(values / math.pi, scalar), error / math.pi

    @staticmethod
    def spectral_green_3d_radial(r: float, t: float, kg: KGParams,
                                 spec: Optional[QuadratureSpec] = None,
                                 h: Optional[float] = None) -> Tuple[float, float]:
        """
        Regular 3D part as -(1/(2 pi² r)) dC/dr, C the cosine transform above,
        with the r-derivative taken by central differences of step h.
        """
        if t <= 0:
            raise DomainError(f"spectral_green_3d_radial needs t > 0, got {t!r}")
        h = 1e-3 * kg.v * t if h is None else h
        if r <= h or kg.v * t - r <= h:
            raise PreconditionError(
                f"radial oracle needs h < r < vt - h (r={r:.6g}, h={h:.3g}, vt={kg.v * t:.6g})"
            )
        spec = spec or QuadratureSpec.from_settings()
        values, error = GreenFunctions._cosine_transform(np.array([r - h, r + h]), t, kg, spec)
        scale = 1.0 / (2.0 * math.pi**2 * r * 2.0 * h)
        return float(-(values[1] - values[0]) * scale), error * 2.0 * scale

    @staticmethod
    def oracle_comparison(r: float, t: float, kg: KGParams,
                          spec: Optional[QuadratureSpec] = None,
                          h_deriv: float = 1e-5,
                          h_spectral: Optional[float] = None) -> Dict[str, float]:
        """Three-way table row: closed form, derivative oracle, spectral oracle."""
        closed = GreenFunctions.green_3d(r, t, kg).regular
        deriv = GreenFunctions.green_3d_from_1d(r, t, kg, h_deriv)
        spectral, _ = GreenFunctions.spectral_green_3d_radial(r, t, kg, spec, h_spectral)
        values = (closed, deriv, spectral)
        scale = max(abs(v) for v in values)
        disagreement = 0.0
        if scale > 0:
            disagreement = max(abs(a - b) for a in values for b in values) / scale
        return {
            "closed_form": closed,
            "deriv_oracle": deriv,
            "spectral_oracle": spectral,
            "max_rel_disagreement": disagreement,
        }
