"""Exact computations with quantum-group actions on quiver path algebras."""

from .errors import QQWError
from .field import INF, PrimeField, QContext, RationalField, make_prime_field_context, make_rational_context

__all__ = [
    "INF",
    "PrimeField",
    "QContext",
    "QQWError",
    "RationalField",
    "make_prime_field_context",
    "make_rational_context",
]

__version__ = "0.1.0"
