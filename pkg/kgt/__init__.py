"""
kgt: Klein-Gordon thermal equation toolkit.
Closed-form Green functions in 1D and 3D, evolution of initial data by
convolution, and spectral / finite-difference oracles that cross-check them.
"""

__version__ = "1.0.0"
__description__ = "Green functions and verification for the hyperbolic Klein-Gordon thermal equation"

import sys
if sys.version_info < (3, 9):
    raise RuntimeError("Python 3.9 or higher is required")

from .calculations.evolution import Evolution
from .calculations.fdtd import FDTDVerifier
from .calculations.green_functions import GreenFunctions
from .calculations.physical_parameters import PhysicalParameters
from .cache import rule_cache
from .config import settings

__all__ = [
    'Evolution',
    'FDTDVerifier',
    'GreenFunctions',
    'PhysicalParameters',
    'rule_cache',
    'settings',
    '__version__',
]
