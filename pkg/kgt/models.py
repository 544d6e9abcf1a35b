"""
Data models with validation using Pydantic v2.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Annotated, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# CODATA 2018
ALPHA = 7.2973525693e-3
SPEED_OF_LIGHT = 2.99792458e8
HBAR = 1.054571817e-34
EPSILON0 = 8.8541878128e-12
ELECTRON_MASS = 9.1093837015e-31
ELEMENTARY_CHARGE = 1.602176634e-19
RYDBERG_ENERGY = 2.1798723611035e-18

# Gaussian profiles are exactly zero beyond this many widths
GAUSSIAN_CUTOFF = 10.0

Support = Optional[Tuple[float, float]]


class FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# ============================================================================
# PHYSICAL PARAMETERS
# ============================================================================

class PhysicalParams(FrozenModel):
    """Fundamental inputs of the Klein-Gordon thermal equation (SI units)."""
    mass: float = Field(default=ELECTRON_MASS, gt=0, description="heaton mass, kg")
    alpha: float = Field(default=ALPHA, gt=0, description="fine-structure constant")
    c: float = Field(default=SPEED_OF_LIGHT, gt=0, description="speed of light, m/s")
    v0: float = Field(default=RYDBERG_ENERGY, ge=0, description="potential V0, J")
    epsilon0: float = Field(default=EPSILON0, gt=0, description="vacuum permittivity, F/m")
    hbar: float = Field(default=HBAR, gt=0, description="reduced Planck constant, J s")

    @field_validator("*")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("must be finite")
        return value


class DerivedParams(FrozenModel):
    """Derived chain v, tau, q², sigma0, lambda_B."""
    v: float
    tau: float
    q_sq: float
    sigma0: float
    lambda_b: float


class ParamFile(FrozenModel):
    """JSON parameter file; every key optional."""
    mass_kg: Optional[float] = None
    alpha: Optional[float] = None
    c_m_s: Optional[float] = None
    v0_joule: Optional[float] = None
    epsilon0_f_m: Optional[float] = None
    hbar_j_s: Optional[float] = None

    def overrides(self) -> Dict[str, float]:
        """Non-null entries renamed to PhysicalParams fields."""
        names = {
            "mass_kg": "mass",
            "alpha": "alpha",
            "c_m_s": "c",
            "v0_joule": "v0",
            "epsilon0_f_m": "epsilon0",
            "hbar_j_s": "hbar",
        }
        return {names[key]: value for key, value in self.model_dump().items() if value is not None}


# ============================================================================
# SPECIAL FUNCTIONS / GREEN FUNCTIONS
# ============================================================================

class BesselAccuracy(FrozenModel):
    """Accuracy contract: |error| <= abs_tol (x e^|x| for I) on |x| <= domain_max."""
    abs_tol: float = Field(default=1e-12, gt=0)
    domain_max: float = Field(default=1e3, gt=0)


class KGParams(FrozenModel):
    """Coefficients of u_tt - v² Δu + q² u = 0."""
    v: float = Field(..., gt=0, description="wave speed, m/s")
    q_sq: float = Field(..., description="q², 1/s², may be negative")

    @field_validator("v", "q_sq")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("must be finite")
        return value

    @property
    def oscillatory(self) -> bool:
        return self.q_sq >= 0

    @property
    def q_abs(self) -> float:
        """sqrt(|q²|)."""
        return math.sqrt(abs(self.q_sq))


class ConeTag(str, Enum):
    INTERIOR = "Interior"
    ON_CONE = "OnCone"
    EXTERIOR = "Exterior"


class ConeRegion(FrozenModel):
    tag: ConeTag
    cone_distance: float = Field(description="t² - r²/v², s²")


class GreenEval3D(FrozenModel):
    """Regular interior value plus the cone-layer multiplier of the spherical mean."""
    regular: float
    cone_layer_coefficient: float
    region: ConeTag


class QuadratureSpec(FrozenModel):
    """Truncated, panelled inversion of the Fourier integral."""
    k_max: Optional[float] = Field(default=None, gt=0, description="1/m; None scales with 1/(v t)")
    n_panels: int = Field(default=8192, ge=64)
    scheme: Literal["gauss_legendre_16"] = "gauss_legendre_16"
    tol: float = Field(default=1e-7, gt=0)
    max_refinements: int = Field(default=2, ge=1)

    @classmethod
    def from_settings(cls) -> "QuadratureSpec":
        from kgt.config import settings
        return cls(
            n_panels=settings.SPECTRAL_PANELS,
            tol=settings.SPECTRAL_TOL,
            max_refinements=settings.SPECTRAL_MAX_REFINEMENTS,
        )


# ============================================================================
# INITIAL DATA PROFILES
# ============================================================================

class _Profile(FrozenModel):
    """Common profile interface; subclasses are evaluable at arrays of points."""

    @property
    def support(self) -> Support:
        return None

    @property
    def breakpoints(self) -> List[float]:
        return []

    @property
    def is_zero(self) -> bool:
        return False

    def is_even(self) -> bool:
        return True

    def max_abs(self) -> float:
        return abs(getattr(self, "amplitude", 0.0))


class GaussianProfile(_Profile):
    shape: Literal["gaussian"] = "gaussian"
    center: float = 0.0
    width: float = Field(..., gt=0)
    amplitude: float = 1.0

    @property
    def support(self) -> Support:
        half = GAUSSIAN_CUTOFF * self.width
        return (self.center - half, self.center + half)

    @property
    def breakpoints(self) -> List[float]:
        return [self.center]

    def is_even(self) -> bool:
        return self.center == 0.0

    def __call__(self, x):
        d = (np.asarray(x, dtype=float) - self.center) / self.width
        return np.where(np.abs(d) <= GAUSSIAN_CUTOFF, self.amplitude * np.exp(-0.5 * d * d), 0.0)

    def derivative(self, x):
        d = (np.asarray(x, dtype=float) - self.center) / self.width
        inside = np.abs(d) <= GAUSSIAN_CUTOFF
        return np.where(inside, -self.amplitude * d / self.width * np.exp(-0.5 * d * d), 0.0)


class RectangleProfile(_Profile):
    shape: Literal["rectangle"] = "rectangle"
    center: float = 0.0
    halfwidth: float = Field(..., gt=0)
    amplitude: float = 1.0

    @property
    def support(self) -> Support:
        return (self.center - self.halfwidth, self.center + self.halfwidth)

    @property
    def breakpoints(self) -> List[float]:
        return list(self.support)

    def is_even(self) -> bool:
        return self.center == 0.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x - self.center) <= self.halfwidth, self.amplitude, 0.0)

    def derivative(self, x):
        # jumps carry no point derivative
        return np.zeros_like(np.asarray(x, dtype=float))


class ConstantProfile(_Profile):
    shape: Literal["constant"] = "constant"
    amplitude: float = 1.0

    @property
    def is_zero(self) -> bool:
        return self.amplitude == 0.0

    def __call__(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.amplitude)

    def derivative(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))


class ZeroProfile(_Profile):
    shape: Literal["zero"] = "zero"

    @property
    def support(self) -> Support:
        return (0.0, 0.0)

    @property
    def is_zero(self) -> bool:
        return True

    def __call__(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def derivative(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))


class TabulatedProfile(_Profile):
    """Linear interpolation of samples, exactly zero outside the declared support."""
    shape: Literal["tabulated"] = "tabulated"
    positions: Tuple[float, ...] = Field(..., min_length=2)
    values: Tuple[float, ...] = Field(..., min_length=2)
    support_interval: Tuple[float, float] = Field(..., alias="support")

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    @model_validator(mode="after")
    def _check(self) -> "TabulatedProfile":
        pos = np.asarray(self.positions)
        if len(self.values) != len(self.positions):
            raise ValueError("positions and values must have equal length")
        if not np.all(np.diff(pos) > 0):
            raise ValueError("positions must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")
        lo, hi = self.support_interval
        if not (lo <= pos[0] and pos[-1] <= hi):
            raise ValueError("positions must lie inside the declared support")
        return self

    @property
    def support(self) -> Support:
        return self.support_interval

    @property
    def breakpoints(self) -> List[float]:
        return list(self.positions)

    @property
    def is_zero(self) -> bool:
        return not any(self.values)

    def is_even(self) -> bool:
        pos = np.asarray(self.positions)
        vals = np.asarray(self.values)
        lo, hi = self.support_interval
        return lo == -hi and np.array_equal(pos, -pos[::-1]) and np.array_equal(vals, vals[::-1])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.interp(x, self.positions, self.values, left=0.0, right=0.0)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        pos = np.asarray(self.positions)
        slopes = np.diff(self.values) / np.diff(pos)
        idx = np.clip(np.searchsorted(pos, x, side="right") - 1, 0, len(slopes) - 1)
        inside = (x >= pos[0]) & (x <= pos[-1])
        return np.where(inside, slopes[idx], 0.0)


Profile = Annotated[
    Union[GaussianProfile, RectangleProfile, ConstantProfile, ZeroProfile, TabulatedProfile],
    Field(discriminator="shape"),
]


class InitialData(FrozenModel):
    """u(x, 0) = phi(x), u_t(x, 0) = psi(x)."""
    phi: Profile = Field(default_factory=ZeroProfile)
    psi: Profile = Field(default_factory=ZeroProfile)

    @property
    def support(self) -> Support:
        """Union of the supports; None when unbounded."""
        intervals = [p.support for p in (self.phi, self.psi) if not p.is_zero]
        if not intervals:
            return (0.0, 0.0)
        if any(interval is None for interval in intervals):
            return None
        return (min(i[0] for i in intervals), max(i[1] for i in intervals))

    def is_radially_symmetric(self) -> bool:
        return self.phi.is_even() and self.psi.is_even()


# ============================================================================
# GRIDS AND FIELDS
# ============================================================================

class SphereQuadrature(FrozenModel):
    """Product rule: Gauss-Legendre in cos(theta) x uniform in phi."""
    n_theta: int = Field(default=64, ge=8)
    n_phi: int = Field(default=16, ge=16)

    @classmethod
    def from_settings(cls) -> "SphereQuadrature":
        from kgt.config import settings
        return cls(n_theta=settings.SPHERE_N_THETA, n_phi=settings.SPHERE_N_PHI)


class SampleGrid(FrozenModel):
    """Uniform sample positions origin + i*spacing; radial (r >= 0) when dimension is 3."""
    origin: float
    spacing: float = Field(..., gt=0)
    n: int = Field(..., ge=1)
    dimension: Literal[1, 3] = 1

    @model_validator(mode="after")
    def _radial_origin(self) -> "SampleGrid":
        if self.dimension == 3 and self.origin < 0:
            raise ValueError("radial grids start at r >= 0")
        return self

    @property
    def positions(self) -> np.ndarray:
        return self.origin + self.spacing * np.arange(self.n)


class FieldGrid(BaseModel):
    """Sampled u or T on a uniform grid at a fixed time, with its parameter record."""
    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    origin: float
    spacing: float = Field(..., gt=0)
    values: np.ndarray
    time: float = Field(..., ge=0)
    kind: Literal["u_field", "temperature"] = "u_field"
    dimension: Literal[1, 3] = 1
    v: float = Field(..., gt=0)
    q_sq: float
    tau: float = Field(..., gt=0)

    @field_validator("values", mode="before")
    @classmethod
    def _finite_values(cls, value) -> np.ndarray:
        array = np.array(value, dtype=float)
        if array.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if not np.all(np.isfinite(array)):
            raise ValueError("values must be finite (NaN/Inf rejected)")
        array.setflags(write=False)
        return array

    @property
    def positions(self) -> np.ndarray:
        return self.origin + self.spacing * np.arange(len(self.values))

    def to_temperature(self) -> "FieldGrid":
        """T = exp(-t/2tau) u applied point by point."""
        from kgt.calculations.evolution import Evolution

        if self.kind == "temperature":
            return self
        values = Evolution.temperature_from_u(self.values, self.time, self.tau)
        return self.model_copy(update={"values": values, "kind": "temperature"})

    def metadata(self) -> Dict[str, object]:
        return {
            "origin_m": self.origin,
            "spacing_m": self.spacing,
            "n": len(self.values),
            "time_s": self.time,
            "kind": self.kind,
            "dimension": self.dimension,
            "v": self.v,
            "q_sq": self.q_sq,
            "tau": self.tau if math.isfinite(self.tau) else "inf",
        }


class Equation(str, Enum):
    DAMPED_EQ1 = "damped_eq1"
    UNDAMPED_EQ13 = "undamped_eq13"


class GridSpec1D(FrozenModel):
    """Uniform FDTD grid; the CFL number is checked against a wave speed at scheme start."""
    x_min: float
    x_max: float
    nx: int = Field(..., ge=3)
    dt: float = Field(..., gt=0)
    n_steps: int = Field(..., ge=0)

    @model_validator(mode="after")
    def _ordered(self) -> "GridSpec1D":
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        return self

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def positions(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def t_final(self) -> float:
        return self.n_steps * self.dt

    def cfl(self, v: float) -> float:
        return v * self.dt / self.dx

    @classmethod
    def from_cfl(cls, x_min: float, x_max: float, nx: int, v: float, t_final: float,
                 cfl: Optional[float] = None) -> "GridSpec1D":
        """Largest dt <= cfl*dx/v that lands exactly on t_final; cfl defaults to settings.CFL."""
        from kgt.config import settings
        cfl = settings.CFL if cfl is None else cfl
        dx = (x_max - x_min) / (nx - 1)
        n_steps = max(1, math.ceil(t_final / (cfl * dx / v) - 1e-9))
        return cls(x_min=x_min, x_max=x_max, nx=nx, dt=t_final / n_steps, n_steps=n_steps)


@dataclass(frozen=True)
class SchemeState:
    """Two consecutive time levels of a leapfrog run."""
    u_prev: np.ndarray
    u_curr: np.ndarray
    step_index: int
    equation: Equation
    radial: bool = False
    support: Support = None

    def __post_init__(self):
        if self.u_prev.shape != self.u_curr.shape:
            raise ValueError("time levels must have equal length")
        if not (np.all(np.isfinite(self.u_prev)) and np.all(np.isfinite(self.u_curr))):
            raise ValueError("scheme state must be finite")


class CompareResult(FrozenModel):
    l2_error: float
    linf_error: float
    l2_relative: float


class CaseResult(FrozenModel):
    """One acceptance case of the verification suite."""
    case: str
    norms: Dict[str, float] = Field(default_factory=dict)
    convergence_ratios: List[float] = Field(default_factory=list)
    passed: bool = Field(..., serialization_alias="pass")
    detail: str = ""
