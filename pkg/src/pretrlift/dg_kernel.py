"""Morphisms, the dg category interface, axiom checking and additive functor tables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from .core_algebra import QQ, Field, GradedBasis, GradedElement, parity_sign


class Morphism:
    """Homogeneous linear combination of basis morphisms ``source -> target``.

    Value semantics: instances are never mutated after construction.
    """

    __slots__ = ("source", "target", "degree", "coeffs", "_hash")

    def __init__(self, source, target, degree: int, coeffs: Mapping | None = None):
        self.source = source
        self.target = target
        self.degree = degree
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v != 0}
        self._hash = None

    def is_zero(self) -> bool:
        return not self.coeffs

    def same_space(self, other: "Morphism") -> bool:
        return (self.source, self.target, self.degree) == (other.source, other.target, other.degree)

    def _check_space(self, other: "Morphism") -> None:
        if not self.same_space(other):
            raise ValueError(
                f"cannot add morphisms in different spaces: {self.degree} vs {other.degree}"
            )

    def __add__(self, other: "Morphism") -> "Morphism":
        self._check_space(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return Morphism(self.source, self.target, self.degree, out)

    def __sub__(self, other: "Morphism") -> "Morphism":
        self._check_space(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) - v
        return Morphism(self.source, self.target, self.degree, out)

    def __neg__(self) -> "Morphism":
        return Morphism(self.source, self.target, self.degree, {k: -v for k, v in self.coeffs.items()})

    def __rmul__(self, c) -> "Morphism":
        if c == 1:
            return self
        return Morphism(self.source, self.target, self.degree, {k: c * v for k, v in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return self.same_space(other) and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.source, self.target, self.degree, frozenset(self.coeffs.items())))
        return self._hash

    def with_endpoints(self, source, target, degree: int | None = None) -> "Morphism":
        return Morphism(source, target, self.degree if degree is None else degree, self.coeffs)

    @property
    def element(self) -> GradedElement:
        return GradedElement(self.degree, self.coeffs)

    def terms(self) -> list:
        return sorted(self.coeffs.items(), key=lambda kv: sort_key(kv[0]))

    def __repr__(self):
        if not self.coeffs:
            return f"0[{self.source}->{self.target}, deg {self.degree}]"
        body = " + ".join(f"{c}*{k}" for k, c in self.terms())
        return f"({body})[{self.source}->{self.target}, deg {self.degree}]"


def format_scalar(c) -> tuple:
    """``(magnitude text, is_negative)``; residues mod p print as balanced representatives."""
    if hasattr(c, "p"):
        v = c.value if c.value <= c.p // 2 else c.value - c.p
        return str(abs(v)), v < 0
    return str(abs(c)), c < 0


def sort_key(x):
    """Total order on nested tuples of ints and strings, used for reproducibility."""
    if isinstance(x, tuple):
        return (2, tuple(sort_key(y) for y in x))
    if isinstance(x, int):
        return (0, x)
    return (1, str(x))


def linear_sum(terms: Iterable[Morphism], source, target, degree: int) -> Morphism:
    out: dict = {}
    for m in terms:
        if m.is_zero():
            continue
        if (m.source, m.target, m.degree) != (source, target, degree):
            raise ValueError("summands live in different hom spaces")
        for k, v in m.coeffs.items():
            out[k] = out.get(k, 0) + v
    return Morphism(source, target, degree, out)


class DgCategory:
    """Interface every category in the package implements.

    Subclasses provide ``hom_basis``, ``_d`` and ``_compose`` and ``identity``;
    this base class adds validation, caching and convenience helpers.
    """

    name = "dg category"

    def __init__(self, field: Field = QQ):
        self.field = field
        self._basis_cache: dict = {}
        self._product_cache: dict = {}

    # -- to be provided by subclasses -------------------------------------
    def _hom_basis(self, X, Y) -> GradedBasis:
        raise NotImplementedError

    def _d(self, m: Morphism) -> Morphism:
        raise NotImplementedError

    def _compose(self, a: Morphism, b: Morphism) -> Morphism:
        raise NotImplementedError

    def identity(self, X) -> Morphism:
        raise NotImplementedError

    def test_objects(self) -> list:
        """A finite list of objects used by exhaustive checks."""
        raise NotImplementedError

    # -- public API ---------------------------------------------------------
    def hom_basis(self, X, Y) -> GradedBasis:
        key = (X, Y)
        basis = self._basis_cache.get(key)
        if basis is None:
            basis = self._hom_basis(X, Y)
            self._basis_cache[key] = basis
        return basis

    def d(self, m: Morphism) -> Morphism:
        if m.is_zero():
            return self.zero(m.source, m.target, m.degree + 1)
        return self._d(m)

    differential = d

    def compose(self, a: Morphism, b: Morphism) -> Morphism:
        if a.source is not b.target and a.source != b.target:
            raise ValueError(f"cannot compose: source {a.source} != target {b.target}")
        if a.is_zero() or b.is_zero():
            return self.zero(b.source, a.target, a.degree + b.degree)
        if len(a.coeffs) == 1 and len(b.coeffs) == 1:
            ((ka, ca),), ((kb, cb),) = a.coeffs.items(), b.coeffs.items()
            unit = self._product_cache.get((b.source, a.source, a.target, ka, kb))
            if unit is None:
                unit = self._basis_product(a, b, ka, kb)
            if ca == 1 and cb == 1:
                return unit
            return (ca * cb) * unit
        # bilinear expansion over memoised products of basis elements
        out: dict = {}
        for ka, ca in a.coeffs.items():
            for kb, cb in b.coeffs.items():
                c = ca * cb
                for k, v in self._basis_product(a, b, ka, kb).coeffs.items():
                    out[k] = out.get(k, 0) + c * v
        return Morphism(b.source, a.target, a.degree + b.degree, out)

    def _basis_product(self, a: Morphism, b: Morphism, ka, kb) -> Morphism:
        # a basis label fixes the degree within its hom space
        key = (b.source, a.source, a.target, ka, kb)
        unit = self._product_cache.get(key)
        if unit is None:
            one = self.field.one
            unit = self._compose(Morphism(a.source, a.target, a.degree, {ka: one}),
                                 Morphism(b.source, b.target, b.degree, {kb: one}))
            self._product_cache[key] = unit
        return unit

    def zero(self, X, Y, degree: int) -> Morphism:
        return Morphism(X, Y, degree)

    def basis_morphism(self, X, Y, key) -> Morphism:
        return Morphism(X, Y, self.hom_basis(X, Y).degree_of(key), {key: self.field.one})

    def basis_morphisms(self, X, Y, degree: int | None = None) -> list[Morphism]:
        basis = self.hom_basis(X, Y)
        degrees = basis.degrees() if degree is None else [degree]
        one = self.field.one
        return [Morphism(X, Y, deg, {k: one}) for deg in degrees for k in basis[deg]]

    def morphism(self, X, Y, degree: int, coeffs: Mapping) -> Morphism:
        """Build a morphism, coercing scalars and validating labels."""
        basis = self.hom_basis(X, Y)
        out = {}
        for k, c in coeffs.items():
            if k not in basis or basis.degree_of(k) != degree:
                raise ValueError(f"{k!r} is not a degree-{degree} basis label of Hom({X}, {Y})")
            out[k] = self.field(c)
        return Morphism(X, Y, degree, out)

    def scalar_identity_factor(self, m: Morphism):
        """Return c if ``m = c·id`` with c nonzero, else None."""
        if m.source != m.target or m.degree != 0 or m.is_zero():
            return None
        ident = self.identity(m.source)
        if not ident.coeffs:
            return None
        k0, v0 = next(iter(ident.coeffs.items()))
        c = m.coeffs.get(k0)
        if c is None:
            return None
        ratio = c / v0
        return ratio if ratio * ident == m else None

    def format_morphism(self, m: Morphism) -> str:
        """Linear combination of formatted basis labels, ``"0"`` for zero."""
        fmt = getattr(self, "format_key", str)
        parts = []
        for k, c in m.terms():
            text, negative = format_scalar(c)
            label = fmt(k)
            body = label if text == "1" else f"{text}*{label}"
            if not parts:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(parts) if parts else "0"

    def sign(self, exponent: int) -> int:
        return parity_sign(exponent)

    def __repr__(self):
        return f"<{self.name}>"


# ---------------------------------------------------------------------------
# axiom checking


@dataclass
class Violation:
    clause: str
    chain: tuple
    residual: Any

    def describe(self) -> str:
        return f"{self.clause}: chain {self.chain} residual {self.residual}"


@dataclass
class AxiomReport:
    category: str
    checked: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def tally(self, clause: str, n: int = 1) -> None:
        self.checked[clause] = self.checked.get(clause, 0) + n

    def fail(self, clause: str, chain: tuple, residual) -> None:
        self.violations.append(Violation(clause, chain, residual))

    def to_dict(self) -> dict:
        return {
            "category": self.category,
            "ok": self.ok,
            "checked": dict(sorted(self.checked.items())),
            "violations": [v.describe() for v in self.violations],
        }


def _valid_differential(C: DgCategory, m: Morphism, dm: Morphism) -> bool:
    if (dm.source, dm.target) != (m.source, m.target) or dm.degree != m.degree + 1:
        return False
    basis = C.hom_basis(m.source, m.target)
    return all(k in basis and basis.degree_of(k) == dm.degree for k in dm.coeffs)


def check_dg_axioms(C: DgCategory, depth: int = 3, objects: Sequence | None = None) -> AxiomReport:
    """Exhaustively test the dg category axioms on basis morphisms.

    Depth 1 covers the differential and the units, depth 2 adds the Leibniz
    rule on composable pairs, depth 3 adds associativity on composable triples.
    """
    objs = list(C.test_objects() if objects is None else objects)
    report = AxiomReport(C.name)
    basis = {(X, Y): C.basis_morphisms(X, Y) for X in objs for Y in objs}

    for X in objs:
        ident = C.identity(X)
        report.tally("d(id)=0")
        if not C.d(ident).is_zero():
            report.fail("d(id)=0", (X,), C.d(ident))
    for (X, Y), ms in basis.items():
        for m in ms:
            dm = C.d(m)
            report.tally("d-degree")
            if not _valid_differential(C, m, dm):
                report.fail("d-degree", (m,), dm)
                continue
            report.tally("d^2=0")
            ddm = C.d(dm)
            if not ddm.is_zero():
                report.fail("d^2=0", (m,), ddm)
            report.tally("units")
            if C.compose(C.identity(Y), m) != m or C.compose(m, C.identity(X)) != m:
                report.fail("units", (m,), None)
    if report.violations or depth < 2:
        return report

    for X, Y, Z in itertools.product(objs, repeat=3):
        for a in basis[(Y, Z)]:
            da = C.d(a)
            for b in basis[(X, Y)]:
                report.tally("Leibniz")
                lhs = C.d(C.compose(a, b))
                rhs = C.compose(da, b) + parity_sign(a.degree) * C.compose(a, C.d(b))
                if lhs != rhs:
                    report.fail("Leibniz", (a, b), lhs - rhs)
    if depth < 3:
        return report

    for W, X, Y, Z in itertools.product(objs, repeat=4):
        bc_cache = {}
        for b in basis[(X, Y)]:
            for c in basis[(W, X)]:
                bc_cache[(b, c)] = C.compose(b, c)
        for a in basis[(Y, Z)]:
            for b in basis[(X, Y)]:
                ab = C.compose(a, b)
                for c in basis[(W, X)]:
                    report.tally("associativity")
                    lhs = C.compose(ab, c)
                    rhs = C.compose(a, bc_cache[(b, c)])
                    if lhs != rhs:
                        report.fail("associativity", (a, b, c), lhs - rhs)
    return report


# ---------------------------------------------------------------------------
# k-linear categories viewed as dg categories


class DegreeZeroView(DgCategory):
    """A k-linear category seen as a dg category with zero differential."""

    def __init__(self, inner: DgCategory):
        super().__init__(inner.field)
        for X in inner.test_objects():
            for Y in inner.test_objects():
                if any(deg != 0 for deg in inner.hom_basis(X, Y).degrees()):
                    raise ValueError(f"Hom({X}, {Y}) is not concentrated in degree 0")
        self.inner = inner
        self.name = f"dg({inner.name})"

    def _hom_basis(self, X, Y):
        return self.inner.hom_basis(X, Y)

    def _d(self, m):
        return self.zero(m.source, m.target, m.degree + 1)

    def _compose(self, a, b):
        return self.inner.compose(a, b)

    def identity(self, X):
        return self.inner.identity(X)

    def test_objects(self):
        return self.inner.test_objects()

    def __getattr__(self, attr):
        return getattr(self.inner, attr)


def as_dg(C: DgCategory) -> DgCategory:
    """View a category with homs in degree 0 as a dg category with ``d = 0``."""
    return DegreeZeroView(C)


# ---------------------------------------------------------------------------
# additive functors on generators and their extension to complexes


@dataclass
class AdditiveFunctorTable:
    """A degree-0 additive functor from generators into complexes.

    ``objects`` sends each generator to an object of ``hull`` (a one-sided
    twisted complex, possibly the zero complex).  ``on_basis(X, Y, key)``
    returns the image of a basis morphism as a closed degree-0 morphism of
    ``hull`` between the images.
    """

    source: DgCategory
    hull: Any
    objects: Mapping
    on_basis: Callable[[Any, Any, Hashable], Morphism]

    def obj(self, X):
        return self.objects[X]

    def mor(self, m: Morphism) -> Morphism:
        FX, FY = self.objects[m.source], self.objects[m.target]
        total = self.hull.zero(FX, FY, m.degree)
        for k, c in m.coeffs.items():
            total = total + c * self.on_basis(m.source, m.target, k)
        return total


class ExtendedFunctor:
    """Termwise application of an additive table to twisted complexes, then totalisation."""

    def __init__(self, table: AdditiveFunctorTable, source_hull):
        self.table = table
        self.source_hull = source_hull
        self.target_hull = table.hull

    def _terms(self, X):
        base_sum = X.obj
        return [(s.obj, s.shift) for s in base_sum.summands]

    def obj(self, X):
        T = self.target_hull
        terms = self._terms(X)
        images = [T.shift(self.table.obj(A), t) for A, t in terms]
        total = T.direct_sum(images)
        twist = T.matrix(
            {
                (j, i): T.translate(self.table.mor(entry), terms[j][1], terms[i][1])
                for (j, i), entry in self.source_hull.entries(X.q).items()
            },
            images,
            images,
            1,
        )
        return T.twist(total, twist)

    def mor(self, m: Morphism) -> Morphism:
        T = self.target_hull
        src_terms, tgt_terms = self._terms(m.source), self._terms(m.target)
        src_imgs = [T.shift(self.table.obj(A), t) for A, t in src_terms]
        tgt_imgs = [T.shift(self.table.obj(A), t) for A, t in tgt_terms]
        blocks = {
            (j, i): T.translate(self.table.mor(entry), tgt_terms[j][1], src_terms[i][1])
            for (j, i), entry in self.source_hull.entries(m).items()
        }
        raw = T.matrix(blocks, src_imgs, tgt_imgs, m.degree)
        return raw.with_endpoints(self.obj(m.source), self.obj(m.target))


def extend_to_complexes(table: AdditiveFunctorTable, source_hull) -> ExtendedFunctor:
    """Extend a generator table to bounded complexes.

    The table is degree 0 and additive, so each term maps to a complex of its
    own and the total complex carries no extra Koszul sign beyond the shift
    decorations already present in the hull.
    """
    return ExtendedFunctor(table, source_hull)
