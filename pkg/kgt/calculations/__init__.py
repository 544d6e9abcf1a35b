"""
Physical parameters, Bessel functions, Green functions, convolution
evolution and the finite-difference oracle.
"""

from .evolution import Evolution
from .fdtd import FDTDVerifier
from .green_functions import GreenFunctions
from .physical_parameters import PhysicalParameters

__all__ = ['Evolution', 'FDTDVerifier', 'GreenFunctions', 'PhysicalParameters']
