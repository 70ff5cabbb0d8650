"""Exact arithmetic for Q(i), F = Q(i)(x, y) and the square-root tower K."""

from .expr import ParseError, parse_expr, parse_lines, xy_variables
from .gaussian import Gaussian
from .poly import MultiPoly, cofactors, gcd, gcd_all
from .ratfunc import RatFunc
from .specialize import (
    DEFAULT_PRIME,
    DenominatorVanishes,
    MissingRoot,
    MissingValue,
    SpecializationMap,
    sample_specialization,
    specialize,
    sqrt_minus_one,
)
from .tower import NotInvertible, TowerElement, indices_mask, mask_indices, tower

__all__ = [
    "DEFAULT_PRIME",
    "DenominatorVanishes",
    "Gaussian",
    "MissingRoot",
    "MissingValue",
    "MultiPoly",
    "NotInvertible",
    "ParseError",
    "RatFunc",
    "SpecializationMap",
    "TowerElement",
    "cofactors",
    "gcd",
    "gcd_all",
    "indices_mask",
    "mask_indices",
    "parse_expr",
    "parse_lines",
    "sample_specialization",
    "specialize",
    "sqrt_minus_one",
    "tower",
    "xy_variables",
]
