"""Exact scalars, graded spaces, suspension and sign bookkeeping, linear algebra."""

from .fields import GF, QQ, Field, ModP, PrimeField, RationalField, field_from_spec, is_prime
from .graded import (
    IDENTITY_MAP,
    GradedBasis,
    GradedElement,
    GradedMap,
    desuspend,
    fukaya_sign,
    parity_sign,
    suspend,
    tensor_apply,
)
from .linalg import Echelon, nullspace, rank, solve

__all__ = [
    "GF", "QQ", "Field", "ModP", "PrimeField", "RationalField", "field_from_spec", "is_prime",
    "IDENTITY_MAP", "GradedBasis", "GradedElement", "GradedMap", "desuspend", "fukaya_sign",
    "parity_sign", "suspend", "tensor_apply", "Echelon", "nullspace", "rank", "solve",
]
