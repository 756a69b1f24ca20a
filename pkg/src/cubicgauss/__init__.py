"""Cubic Gauss sums over the Eisenstein integers: exact arithmetic in Z[w],
the cubic residue symbol, fast Gauss sum evaluation and numerical
experiments on their distribution.
"""

from .eisenstein import EI, EisensteinInt, factor, split_rational_prime
from .gauss import GaussSumValue, gauss_sum_direct, gtilde, kummer_angle, kummer_sum_Sp
from .symbol import CubicValue, cubic_symbol

__version__ = "0.1.0"

__all__ = [
    "CubicValue",
    "EI",
    "EisensteinInt",
    "GaussSumValue",
    "cubic_symbol",
    "factor",
    "gauss_sum_direct",
    "gtilde",
    "kummer_angle",
    "kummer_sum_Sp",
    "split_rational_prime",
]
