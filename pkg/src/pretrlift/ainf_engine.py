"""A∞ views of dg categories, A∞-functors with strict units, and the functor relation.

Suspended morphisms are never materialised: a morphism ``m`` passed to or
returned from ``b1``, ``b2`` or ``f_n`` stands for ``↓m``, and signs are
computed from the suspended degrees ``|m| - 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .core_algebra import fukaya_sign
from .dg_kernel import DgCategory, Morphism


def suspended_degree(m: Morphism) -> int:
    return m.degree - 1


class AInfView:
    """The A∞ structure of a dg category: ``b1``, ``b2`` and ``b_n = 0`` for n ≥ 3."""

    def __init__(self, C: DgCategory):
        self.C = C

    def b1(self, m: Morphism) -> Morphism:
        return -self.C.d(m)

    def b2(self, a: Morphism, b: Morphism) -> Morphism:
        ab = self.C.compose(a, b)
        return -ab if a.degree % 2 else ab

    def stasheff_residuals(self, chain: Sequence[Morphism], inner=None) -> Morphism:
        """Left side of the Stasheff identity of arity ``len(chain)`` (1, 2 or 3).

        ``inner`` may replace ``b2`` for the products of adjacent chain entries
        (a memoised version, say).
        """
        n = len(chain)
        degs = [suspended_degree(m) for m in chain]
        if n == 1:
            return self.b1(self.b1(chain[0]))
        if n == 2:
            x, y = chain
            return (
                fukaya_sign(degs, 1) * self.b2(x, self.b1(y))
                + self.b2(self.b1(x), y)
                + self.b1(self.b2(x, y))
            )
        if n == 3:
            x, y, z = chain
            b2 = inner or self.b2
            return fukaya_sign(degs, 1) * self.b2(x, b2(y, z)) + self.b2(b2(x, y), z)
        raise ValueError("only arities 1, 2, 3 carry nontrivial identities")


def dg_to_ainf(C: DgCategory) -> AInfView:
    return AInfView(C)


def chain_endpoints(chain: Sequence[Morphism]) -> tuple:
    for left, right in zip(chain, chain[1:]):
        if left.source != right.target:
            raise ValueError(f"chain is not composable at {right.target} -> {left.source}")
    return chain[-1].source, chain[0].target


def output_degree(chain: Sequence[Morphism]) -> int:
    """Unsuspended degree of ``f_n`` on the chain (``f_n`` has degree 0 on suspensions)."""
    return sum(m.degree for m in chain) - len(chain) + 1


class AInfFunctor:
    """Object map plus multilinear ``f_n``; subclasses implement ``_fn``.

    ``support_bound`` is ``N`` with ``f_n = 0`` for ``n > N`` (``None`` if unknown).
    """

    support_bound: int | None = None
    name = "functor"

    def __init__(self, source: DgCategory, target: DgCategory):
        self.source = source
        self.target = target
        self._cache: dict = {}

    def obj(self, X):
        raise NotImplementedError

    def _fn(self, chain: tuple) -> Morphism:
        raise NotImplementedError

    def fn(self, chain: Sequence[Morphism]) -> Morphism:
        chain = tuple(chain)
        if not chain:
            raise ValueError("f_0 is not part of the functor data")
        cached = self._cache.get(chain)
        if cached is not None:
            return cached
        X, Y = chain_endpoints(chain)
        deg = output_degree(chain)
        if any(m.is_zero() for m in chain) or (
            self.support_bound is not None and len(chain) > self.support_bound
        ):
            value = self.target.zero(self.obj(X), self.obj(Y), deg)
        else:
            value = self._fn(chain)
            if value.degree != deg or value.source != self.obj(X) or value.target != self.obj(Y):
                raise AssertionError(f"{self.name}: f_{len(chain)} produced a morphism in the wrong space")
        self._cache[chain] = value
        return value

    def f1(self, m: Morphism) -> Morphism:
        return self.fn((m,))


class TableFunctor(AInfFunctor):
    """Functor given by sparse tables on basis tuples, strictly unital by construction.

    ``tables[n]`` maps tuples of ``(source, target, key)`` triples, listed left to
    right, to target morphisms.  Missing entries are zero.  Identity keys are
    handled automatically.
    """

    def __init__(self, source, target, objects: Mapping, tables: Mapping, name="table functor"):
        super().__init__(source, target)
        self.objects = dict(objects)
        self.tables = {n: dict(t) for n, t in tables.items()}
        self.support_bound = max((n for n, t in self.tables.items() if t), default=1)
        self.name = name
        self._id_keys = {}

    def obj(self, X):
        return self.objects[X]

    def _is_identity(self, X, Y, key) -> bool:
        if X != Y:
            return False
        ident = self._id_keys.get(X)
        if ident is None:
            ident = self.source.identity(X).coeffs
            self._id_keys[X] = ident
        return len(ident) == 1 and key in ident

    def _fn(self, chain):
        n = len(chain)
        X, Y = chain_endpoints(chain)
        FX, FY = self.obj(X), self.obj(Y)
        deg = output_degree(chain)
        total: dict = {}
        table = self.tables.get(n, {})
        for terms in itertools.product(*(m.terms() for m in chain)):
            coeff = 1
            labels = []
            for m, (k, c) in zip(chain, terms):
                coeff = coeff * c
                labels.append((m.source, m.target, k))
            if n == 1:
                (s, t, k), = labels
                if self._is_identity(s, t, k):
                    ident = self.source.identity(s).coeffs[k]
                    value = (coeff / ident) * self.target.identity(FX)
                else:
                    value = table.get(labels[0])
                    if value is None:
                        continue
                    value = coeff * value
            else:
                if any(self._is_identity(*lab) for lab in labels):
                    continue
                value = table.get(tuple(labels))
                if value is None:
                    continue
                value = coeff * value
            for k, c in value.coeffs.items():
                total[k] = total.get(k, 0) + c
        return Morphism(FX, FY, deg, total)


class EmbeddedFunctor(AInfFunctor):
    """Compose a functor into ``B`` with the embedding ``B -> pretr(B)``."""

    def __init__(self, inner: AInfFunctor, hull):
        super().__init__(inner.source, hull)
        self.inner = inner
        self.support_bound = inner.support_bound
        self.name = f"embedded {inner.name}"

    def obj(self, X):
        return self.target.embed_object(self.inner.obj(X))

    def _fn(self, chain):
        return self.target.embed(self.inner.fn(chain))


class IdentityFunctor(AInfFunctor):
    """The identity dg functor, viewed as an A∞-functor."""

    support_bound = 1
    name = "identity"

    def __init__(self, C: DgCategory):
        super().__init__(C, C)

    def obj(self, X):
        return X

    def _fn(self, chain):
        return chain[0]


# ---------------------------------------------------------------------------
# the functor relation


def relation_terms(F: AInfFunctor, chain: Sequence[Morphism]) -> dict:
    """The four sums of the A∞-functor relation at ``(↓α^n, ..., ↓α^1)``."""
    chain = tuple(chain)
    n = len(chain)
    S, T = AInfView(F.source), AInfView(F.target)
    X, Y = chain_endpoints(chain)
    FX, FY = F.obj(X), F.obj(Y)
    deg = output_degree(chain) + 1
    degs = [suspended_degree(m) for m in chain]
    zero = F.target.zero(FX, FY, deg)

    a_term = zero
    for i in range(n):
        replaced = chain[:i] + (S.b1(chain[i]),) + chain[i + 1:]
        a_term = a_term + fukaya_sign(degs, i) * F.fn(replaced)
    b_term = zero
    for i in range(n - 1):
        replaced = chain[:i] + (S.b2(chain[i], chain[i + 1]),) + chain[i + 2:]
        b_term = b_term + fukaya_sign(degs, i) * F.fn(replaced)
    c_term = zero
    for i in range(1, n):
        c_term = c_term + T.b2(F.fn(chain[:i]), F.fn(chain[i:]))
    d_term = T.b1(F.fn(chain))
    return {"A": a_term, "B": b_term, "C": c_term, "D": d_term}


def check_functor_relation(F: AInfFunctor, chain: Sequence[Morphism]) -> Morphism:
    """Residual ``A + B - C - D``; zero exactly when the relation holds at the chain."""
    t = relation_terms(F, chain)
    return t["A"] + t["B"] - t["C"] - t["D"]


def degenerate_chain_skip(chain: Sequence[Morphism], C: DgCategory) -> bool:
    """True when some entry is a nonzero scalar multiple of an identity."""
    return any(C.scalar_identity_factor(m) is not None for m in chain)


def basis_chains(C: DgCategory, objects: Sequence, n: int) -> Iterator[tuple]:
    """All composable chains ``(α^n, ..., α^1)`` of basis morphisms between ``objects``."""
    objects = list(objects)
    basis = {}

    def hom(X, Y):
        key = (X, Y)
        if key not in basis:
            basis[key] = C.basis_morphisms(X, Y)
        return basis[key]

    def extend(prefix_rev: list, current):
        if len(prefix_rev) == n:
            yield tuple(reversed(prefix_rev))
            return
        for Y in objects:
            for m in hom(current, Y):
                prefix_rev.append(m)
                yield from extend(prefix_rev, Y)
                prefix_rev.pop()

    for X in objects:
        yield from extend([], X)


def random_chains(C: DgCategory, objects: Sequence, n: int, count: int, rng, attempts: int = 50) -> list:
    """``count`` random composable chains of non-identity basis morphisms of length ``n``.

    Walks backwards from a random source; a walk that dead-ends is retried.
    """
    objects = list(objects)
    moves: dict = {}
    for X in objects:
        out = []
        for Y in objects:
            for m in C.basis_morphisms(X, Y):
                if C.scalar_identity_factor(m) is None:
                    out.append(m)
        moves[X] = out
    chains = []
    for _ in range(count):
        for _ in range(attempts):
            X = rng.choice(objects)
            walk = []
            while len(walk) < n and moves[X]:
                m = rng.choice(moves[X])
                walk.append(m)
                X = m.target
            if len(walk) == n:
                chains.append(tuple(reversed(walk)))
                break
    return chains


@dataclass
class RelationReport:
    functor: str
    checked: dict = field(default_factory=dict)
    skipped_degenerate: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "functor": self.functor,
            "ok": self.ok,
            "checked": {str(k): v for k, v in sorted(self.checked.items())},
            "skipped_degenerate": {str(k): v for k, v in sorted(self.skipped_degenerate.items())},
            "failures": [repr(f) for f in self.failures[:10]],
        }


def check_relation_suite(
    F: AInfFunctor,
    objects: Sequence,
    max_length: int = 3,
    chains: Iterable | None = None,
    report: RelationReport | None = None,
) -> RelationReport:
    """Check the functor relation on every non-degenerate basis chain up to ``max_length``."""
    report = report or RelationReport(F.name)
    sources = chains if chains is not None else (
        c for n in range(1, max_length + 1) for c in basis_chains(F.source, objects, n)
    )
    for chain in sources:
        n = len(chain)
        if degenerate_chain_skip(chain, F.source):
            report.skipped_degenerate[n] = report.skipped_degenerate.get(n, 0) + 1
            continue
        report.checked[n] = report.checked.get(n, 0) + 1
        residual = check_functor_relation(F, chain)
        if not residual.is_zero():
            report.failures.append((chain, residual))
    return report


@dataclass
class StasheffReport:
    category: str
    checked: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_stasheff(C: DgCategory, objects: Sequence | None = None) -> StasheffReport:
    view = AInfView(C)
    objs = list(C.test_objects() if objects is None else objects)
    report = StasheffReport(C.name)
    pairs: dict = {}

    def inner(a, b):
        value = pairs.get((a, b))
        if value is None:
            value = pairs[(a, b)] = view.b2(a, b)
        return value

    for n in (1, 2, 3):
        for chain in basis_chains(C, objs, n):
            report.checked[n] = report.checked.get(n, 0) + 1
            r = view.stasheff_residuals(chain, inner)
            if not r.is_zero():
                report.failures.append((chain, r))
    return report


# ---------------------------------------------------------------------------
# homotopy categories


class H0Functor:
    """``H⁰(F)``: objects as ``F``, closed degree-0 classes via ``f_1``."""

    def __init__(self, F: AInfFunctor):
        self.F = F

    def obj(self, X):
        return self.F.obj(X)

    def mor(self, alpha: Morphism) -> Morphism:
        if alpha.degree != 0 or not self.F.source.d(alpha).is_zero():
            raise ValueError("H⁰ is defined on closed degree-0 morphisms only")
        return self.F.f1(alpha)

    def composition_defect(self, a: Morphism, b: Morphism) -> Morphism:
        """``f1(a∘b) - f1(a)∘f1(b)``: a coboundary when ``H⁰(F)`` is a functor."""
        return self.mor(self.F.source.compose(a, b)) - self.F.target.compose(self.mor(a), self.mor(b))

    def respects_composition(self, a: Morphism, b: Morphism):
        """Return a homotopy ``h`` with ``d(h)`` equal to the defect, or ``None``."""
        from .homology_lab import hom_complex, solve_coboundary

        defect = self.composition_defect(a, b)
        K = hom_complex(self.F.target, defect.source, defect.target)
        return solve_coboundary(K, defect)


def h0_functor(F: AInfFunctor) -> H0Functor:
    return H0Functor(F)
