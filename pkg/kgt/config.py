"""
Configuration management with validation.
"""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Solver and output settings, overridable through ``KGT_*`` variables."""

    model_config = SettingsConfigDict(env_prefix="KGT_", env_file=".env", case_sensitive=False)

    APP_NAME: str = Field(default="kgt")
    LOG_LEVEL: str = Field(default="warning")

    # Cone classification tolerance, relative to t²
    CONE_EPS_REL: float = Field(default=1e-12, gt=0, lt=1e-3)

    # Adaptive convolution quadrature (evolution)
    QUAD_TOL: float = Field(default=1e-10, gt=0, lt=1e-2)

    # Spectral oracles
    SPECTRAL_K_MAX_FACTOR: float = Field(default=8000.0, ge=100.0)
    SPECTRAL_PANELS: int = Field(default=8192, ge=64)
    SPECTRAL_TOL: float = Field(default=1e-7, gt=0)
    SPECTRAL_MAX_REFINEMENTS: int = Field(default=2, ge=1, le=6)

    # Spherical means
    SPHERE_N_THETA: int = Field(default=64, ge=8)
    SPHERE_N_PHI: int = Field(default=16, ge=16)

    # FDTD
    CFL: float = Field(default=0.9, gt=0, le=1.0)

    RULE_CACHE_SIZE: int = Field(default=64, ge=8, le=4096)
    OUTPUT_DIGITS: int = Field(default=17, ge=6, le=17)


settings = Settings()
