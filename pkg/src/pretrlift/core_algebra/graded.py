"""Graded vector spaces with named bases, suspension, and Fukaya signs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Sequence


def parity_sign(exponent: int) -> int:
    """(-1)**exponent for any integer exponent."""
    return -1 if exponent % 2 else 1


def fukaya_sign(suspended_degrees: Sequence[int], i: int) -> int:
    """Sign picked up by an odd operator passing the leftmost ``i`` arguments.

    ``suspended_degrees`` lists the degrees of the suspended arguments from left
    to right.
    """
    if not 0 <= i <= len(suspended_degrees):
        raise IndexError(f"cannot pass {i} of {len(suspended_degrees)} arguments")
    return parity_sign(sum(suspended_degrees[:i]))


class GradedBasis:
    """Finite graded basis: degree -> ordered, duplicate-free labels."""

    def __init__(self, by_degree: Mapping[int, Sequence[Hashable]]):
        cleaned = {}
        for deg, labels in by_degree.items():
            labels = tuple(labels)
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate labels in degree {deg}")
            if labels:
                cleaned[int(deg)] = labels
        self._by_degree = dict(sorted(cleaned.items()))
        self._degree_of = {lab: d for d, labs in self._by_degree.items() for lab in labs}

    def degrees(self) -> list[int]:
        return list(self._by_degree)

    def __getitem__(self, degree: int) -> tuple:
        return self._by_degree.get(degree, ())

    def degree_of(self, label) -> int:
        return self._degree_of[label]

    def dimension(self, degree: int | None = None) -> int:
        if degree is None:
            return len(self._degree_of)
        return len(self[degree])

    def __contains__(self, label):
        return label in self._degree_of

    def __repr__(self):
        return f"GradedBasis({self._by_degree!r})"


@dataclass(frozen=True)
class GradedElement:
    """Homogeneous element of a graded space.

    ``suspension`` counts applied suspensions: 0 for a plain element, -1 for
    ``↓v``.  The stored degree is always the degree of the element as it
    stands, so ``↓v`` has degree ``|v| - 1``.
    """

    degree: int
    coeffs: Mapping = field(default_factory=dict)
    suspension: int = 0

    def __post_init__(self):
        nonzero = {k: c for k, c in dict(self.coeffs).items() if c != 0}
        object.__setattr__(self, "coeffs", nonzero)

    def __hash__(self):
        return hash((self.degree, self.suspension, frozenset(self.coeffs.items())))

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return (self.degree, self.suspension, self.coeffs) == (
            other.degree,
            other.suspension,
            other.coeffs,
        )

    def is_zero(self) -> bool:
        return not self.coeffs

    def check_homogeneous(self, basis: GradedBasis) -> None:
        base_degree = self.degree - self.suspension
        for label in self.coeffs:
            if basis.degree_of(label) != base_degree:
                raise ValueError(f"label {label!r} is not of degree {base_degree}")

    def scaled(self, c) -> "GradedElement":
        return GradedElement(self.degree, {k: c * v for k, v in self.coeffs.items()}, self.suspension)

    def __add__(self, other: "GradedElement") -> "GradedElement":
        if (self.degree, self.suspension) != (other.degree, other.suspension):
            raise ValueError("adding elements of different degree")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return GradedElement(self.degree, out, self.suspension)

    def __neg__(self):
        return self.scaled(-1)


def suspend(v: GradedElement) -> GradedElement:
    return GradedElement(v.degree - 1, v.coeffs, v.suspension - 1)


def desuspend(v: GradedElement) -> GradedElement:
    if v.suspension >= 0:
        raise ValueError("desuspend applied to an element that carries no suspension")
    return GradedElement(v.degree + 1, v.coeffs, v.suspension + 1)


@dataclass(frozen=True)
class GradedMap:
    """A homogeneous linear map given by a Python callable."""

    degree: int
    apply: Callable[[GradedElement], GradedElement]

    def __call__(self, v: GradedElement) -> GradedElement:
        return self.apply(v)


IDENTITY_MAP = GradedMap(0, lambda v: v)


def tensor_apply(maps: Sequence[GradedMap], elements: Sequence[GradedElement]):
    """Apply ``m_1 ⊗ ... ⊗ m_k`` to ``v_1 ⊗ ... ⊗ v_k`` with Fukaya's convention.

    Returns ``(sign, outputs)``: map ``m_b`` passes every ``v_a`` with ``a < b``,
    contributing ``(-1)^{|v_a| |m_b|}``.
    """
    if len(maps) != len(elements):
        raise ValueError(f"{len(maps)} maps applied to {len(elements)} tensor factors")
    exponent = 0
    passed = 0
    for m, v in zip(maps, elements):
        exponent += passed * m.degree
        passed += v.degree
    outputs = tuple(m(v) for m, v in zip(maps, elements))
    for m, v, w in zip(maps, elements, outputs):
        if not w.is_zero() and w.degree != v.degree + m.degree:
            raise ValueError(f"map of degree {m.degree} produced degree {w.degree} from {v.degree}")
    return parity_sign(exponent), outputs
