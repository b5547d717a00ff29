"""Exact engine for the motivic lambda algebra over fields of odd characteristic."""

from .coeff import CoeffMonomial, CoefficientModule, binom_mod2, half_floor, reduce_coeff
from .algebra import (
    Element,
    LambdaMonomial,
    TriDegree,
    adem_expand,
    multiply,
    normal_form,
    parse_element,
)

__all__ = [
    "CoeffMonomial",
    "CoefficientModule",
    "binom_mod2",
    "half_floor",
    "reduce_coeff",
    "Element",
    "LambdaMonomial",
    "TriDegree",
    "adem_expand",
    "multiply",
    "normal_form",
    "parse_element",
]
