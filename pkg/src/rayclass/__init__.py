"""Computational tools for ray class fields of imaginary quadratic fields.

The layers build on each other: exact field and ideal arithmetic
(:mod:`cmfield`, :mod:`quadforms`, :mod:`ideals`), q-series evaluation of
modular functions (:mod:`modfun`), class-field aggregates
(:mod:`classfield`) and the explicit bound with its numeric certificates
(:mod:`bounds`).
"""

__version__ = "0.1.0"

from .cmfield import FieldInvariants, SplitType, classify_prime, field_invariants
from .errors import DomainError, PoleError, PrecisionError, RayClassError, UnsupportedFieldError
from .numerics import ComplexValue, EvalContext, context

__all__ = [
    "ComplexValue",
    "DomainError",
    "EvalContext",
    "FieldInvariants",
    "PoleError",
    "PrecisionError",
    "RayClassError",
    "SplitType",
    "UnsupportedFieldError",
    "classify_prime",
    "context",
    "field_invariants",
]
