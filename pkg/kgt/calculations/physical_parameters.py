"""
Derivation chain from fundamental constants to v, tau, q², sigma0 and lambda_B.
"""

import logging
from typing import Optional, Tuple

from kgt.errors import DomainError
from kgt.models import DerivedParams, KGParams, PhysicalParams

logger = logging.getLogger(__name__)

IDENTITY_RTOL = 1e-12


class PhysicalParameters:
    """Quantum heat transport parameters of a heaton (all SI)."""

    @staticmethod
    def _require_positive_mass(p: PhysicalParams) -> None:
        if not p.mass > 0:
            raise DomainError(f"heaton mass must be positive, got {p.mass!r}")

    @staticmethod
    def wave_speed(p: PhysicalParams) -> float:
        """v = alpha c"""
        return p.alpha * p.c

    @staticmethod
    def relaxation_time(p: PhysicalParams) -> float:
        """tau = hbar / (m alpha² c²)"""
        PhysicalParameters._require_positive_mass(p)
        v = PhysicalParameters.wave_speed(p)
        return p.hbar / (p.mass * v * v)

    @staticmethod
    def q_squared(p: PhysicalParams) -> float:
        """
        q² = 2 V0 m v²/hbar² - (m v²/(2 hbar))².

        Negative whenever V0 < m v²/8; the sign is kept.
        """
        v = PhysicalParameters.wave_speed(p)
        mv2 = p.mass * v * v
        half_rate = mv2 / (2.0 * p.hbar)
        return 2.0 * p.v0 * mv2 / (p.hbar * p.hbar) - half_rate * half_rate

    @staticmethod
    def conductivity(p: PhysicalParams) -> float:
        """sigma0 = epsilon0 m alpha² c² / hbar = epsilon0 / tau"""
        return p.epsilon0 / PhysicalParameters.relaxation_time(p)

    @staticmethod
    def de_broglie_wavelength(p: PhysicalParams) -> float:
        """lambda_B = hbar / (m alpha c)"""
        PhysicalParameters._require_positive_mass(p)
        return p.hbar / (p.mass * p.alpha * p.c)

    @staticmethod
    def conductivity_identity_check(
        p: PhysicalParams,
        lambda_b_override: Optional[float] = None,
    ) -> Tuple[bool, float]:
        """
        Compare sigma0 from m alpha² c²/hbar with epsilon0 alpha c / lambda_B.

        ``lambda_b_override`` replaces the computed wavelength (diagnostic mode).
        Returns (agree to 1e-12 relative, relative residual).
        """
        direct = p.epsilon0 * p.mass * p.alpha**2 * p.c**2 / p.hbar
        lambda_b = (
            PhysicalParameters.de_broglie_wavelength(p)
            if lambda_b_override is None
            else lambda_b_override
        )
        if not lambda_b > 0:
            raise DomainError(f"de Broglie wavelength must be positive, got {lambda_b!r}")
        via_wavelength = p.epsilon0 * p.alpha * p.c / lambda_b
        residual = abs(direct - via_wavelength) / abs(direct)
        return residual <= IDENTITY_RTOL, residual

    @staticmethod
    def derive(p: PhysicalParams) -> DerivedParams:
        """Full derived chain."""
        derived = DerivedParams(
            v=PhysicalParameters.wave_speed(p),
            tau=PhysicalParameters.relaxation_time(p),
            q_sq=PhysicalParameters.q_squared(p),
            sigma0=PhysicalParameters.conductivity(p),
            lambda_b=PhysicalParameters.de_broglie_wavelength(p),
        )
        logger.info(
            f"derived v={derived.v:.6g} m/s tau={derived.tau:.6g} s q²={derived.q_sq:.6g} 1/s² "
            f"sigma0={derived.sigma0:.6g} 1/(Ohm m) lambda_B={derived.lambda_b:.6g} m"
        )
        if derived.q_sq < 0:
            logger.warning(
                f"q² = {derived.q_sq:.6g} < 0 (V0 below m v²/8): interior response uses I-Bessel functions"
            )
        return derived

    @staticmethod
    def kg_params(p: PhysicalParams) -> KGParams:
        return KGParams(v=PhysicalParameters.wave_speed(p), q_sq=PhysicalParameters.q_squared(p))

