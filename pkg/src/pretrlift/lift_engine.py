"""Lifting A∞-functors along the translation, sum and twist completions.

Every lift targets a pretriangulated hull ``T`` (class :class:`Pretr`), whose
translates, sums and twists are realised on the nose.  The composite
``f_sharp`` goes ``A -> A^[.] -> (A^[.])^+ -> Tw((A^[.])^+)`` and restricts to
one-sided twisted complexes.
"""

from __future__ import annotations

import itertools

from .ainf_engine import AInfFunctor, chain_endpoints, output_degree
from .completions import (
    DirectSum,
    Pretr,
    SumCompletion,
    TranslationCompletion,
    TwistCompletion,
    Twisted,
    check_maurer_cartan,
)
from .core_algebra import parity_sign
from .dg_kernel import Morphism


class LiftError(ValueError):
    pass


class TranslationLift(AInfFunctor):
    """``F(A[i]) = f(A)[i]`` and ``F_n = (-1)^{Σ i_j} ⟨i_{n+1} f_n(...) i_1⟩``."""

    name = "translation lift"

    def __init__(self, f: AInfFunctor, source: TranslationCompletion | None = None):
        if not isinstance(f.target, Pretr):
            raise LiftError("the target must provide translates (a pretriangulated hull)")
        super().__init__(source or TranslationCompletion(f.source), f.target)
        self.f = f
        self.support_bound = f.support_bound

    def obj(self, X):
        return self.target.shift(self.f.obj(X.obj), X.shift)

    def _fn(self, chain):
        shifts = [chain[-1].source.shift] + [m.target.shift for m in reversed(chain)]
        for left, right in zip(chain, chain[1:]):
            if left.source.shift != right.target.shift:
                raise LiftError("translation mismatch along the chain")
        inner = tuple(self.source.under(m) for m in chain)
        value = self.f.fn(inner)
        out = self.target.translate(value, shifts[-1], shifts[0])
        return parity_sign(sum(shifts)) * out


class SumLift(AInfFunctor):
    """``F(⊕A_i) = ⊕f(A_i)``; entries sum ``f_n`` over intermediate indices."""

    name = "sum lift"

    def __init__(self, f: AInfFunctor, source: SumCompletion | None = None):
        if not isinstance(f.target, Pretr):
            raise LiftError("the target must provide direct sums (a pretriangulated hull)")
        super().__init__(source or SumCompletion(f.source), f.target)
        self.f = f
        self.support_bound = f.support_bound

    def obj(self, X):
        return self.target.direct_sum([self.f.obj(A) for A in X.summands])

    def _fn(self, chain):
        X, Y = chain_endpoints(chain)
        n = len(chain)
        entries = [self.source.entries(m) for m in chain]  # leftmost first
        by_col = []
        for e in entries:
            cols: dict = {}
            for (j, i), m in e.items():
                cols.setdefault(i, []).append((j, m))
            by_col.append(cols)
        blocks: dict = {}

        def walk(level: int, col: int, start: int, picked: list):
            # level counts from the rightmost matrix
            if level == n:
                value = self.f.fn(tuple(reversed(picked)))
                key = (col, start)
                blocks[key] = blocks[key] + value if key in blocks else value
                return
            for row, m in by_col[n - 1 - level].get(col, ()):
                picked.append(m)
                walk(level + 1, row, start, picked)
                picked.pop()

        for i in range(len(X.summands)):
            walk(0, i, i, [])
        sources = [self.f.obj(A) for A in X.summands]
        targets = [self.f.obj(B) for B in Y.summands]
        return self.target.matrix(blocks, sources, targets, output_degree(chain))


def nilpotence_bound(C, p: Morphism, bound: int | None = None) -> int | None:
    """Bound on consecutive copies of ``p`` that can survive, or ``None``.

    A strictly triangular twist over ``s`` summands gives ``s - 1``.
    """
    if p.is_zero():
        return 0
    obj = p.source
    if isinstance(obj, DirectSum):
        keys = [(k[0], k[1]) for k in p.coeffs]
        if all(j > i for j, i in keys) or all(j < i for j, i in keys):
            return len(obj.summands) - 1
    return bound


def object_mc_image(f: AInfFunctor, p: Morphism, bound: int | None = None) -> Morphism:
    """``q = Σ_n f_n(p, ..., p)``, checked against the Maurer-Cartan equation."""
    if p.degree != 1 or p.source != p.target:
        raise LiftError("expected a degree 1 endomorphism")
    FX = f.obj(p.source)
    q = f.target.zero(FX, FX, 1)
    limit = nilpotence_bound(f.source, p, bound)
    if f.support_bound is not None:
        limit = f.support_bound if limit is None else min(limit, f.support_bound)
    if limit is None:
        raise LiftError("no finiteness certificate for the Maurer-Cartan sum; pass a bound")
    for n in range(1, limit + 1):
        q = q + f.fn((p,) * n)
    ok, residual = check_maurer_cartan(f.target, q)
    if not ok:
        raise LiftError(f"image of a Maurer-Cartan element fails the equation: {residual}")
    return q


class TwistLift(AInfFunctor):
    """Lift to twisted complexes: interleave powers of the twists into ``f_n``."""

    name = "twist lift"

    def __init__(self, f: AInfFunctor, source: TwistCompletion | None = None, bound: int | None = None):
        if not isinstance(f.target, Pretr):
            raise LiftError("the target must provide twisted complexes (a pretriangulated hull)")
        super().__init__(source or TwistCompletion(f.source), f.target)
        self.f = f
        self.bound = bound
        self.support_bound = f.support_bound
        self._obj_cache: dict = {}

    def twist_image(self, X: Twisted) -> Morphism:
        return object_mc_image(self.f, X.q, self.bound)

    def obj(self, X):
        out = self._obj_cache.get(X)
        if out is None:
            out = self.target.twist(self.f.obj(X.obj), self.twist_image(X))
            self._obj_cache[X] = out
        return out

    def _limits(self, X) -> int:
        lim = nilpotence_bound(self.f.source, X.q, self.bound)
        if lim is None:
            raise LiftError("twist without a vanishing bound; pass bound=")
        return lim

    def _fn(self, chain):
        n = len(chain)
        objects = [chain[-1].source] + [m.target for m in reversed(chain)]  # X_1 .. X_{n+1}
        limits = [self._limits(X) for X in objects]
        total_cap = self.support_bound
        under = [self.source.under(m) for m in chain]  # leftmost first
        Fsrc, Ftgt = self.f.obj(objects[0].obj), self.f.obj(objects[-1].obj)
        value = self.target.zero(Fsrc, Ftgt, output_degree(chain))
        for js in itertools.product(*(range(lim + 1) for lim in limits)):
            if total_cap is not None and n + sum(js) > total_cap:
                continue
            # js[k] is the power of p_{k+1}; assemble left to right
            seq = []
            for pos in range(n, -1, -1):
                seq.extend([objects[pos].q] * js[pos])
                if pos > 0:
                    seq.append(under[n - pos])
            value = value + self.f.fn(tuple(seq))
        return self.target.twisted_morphism(value, self.obj(objects[0]), self.obj(objects[-1]))


class FSharp(AInfFunctor):
    """``F♯ : pretr(A) -> pretr(B)`` for ``F : A -> pretr(B)``."""

    name = "F-sharp"

    def __init__(self, F: AInfFunctor, source_hull: Pretr | None = None):
        if not isinstance(F.target, Pretr):
            raise LiftError("F must land in a pretriangulated hull")
        hull = source_hull or Pretr(F.source)
        if hull.ground is not F.source:
            raise LiftError("source hull is built over a different category")
        super().__init__(hull, F.target)
        self.F = F
        self.translations = TranslationLift(F, hull.trans)
        self.sums = SumLift(self.translations, hull.sums)
        self.twists = TwistLift(self.sums, hull)
        self.support_bound = F.support_bound

    def obj(self, X):
        if not self.source.is_one_sided(X):
            raise LiftError(f"{X!r} is not one-sided")
        out = self.twists.obj(X)
        if not self.target.is_one_sided(out):
            raise LiftError("image is not one-sided")
        return out

    def _fn(self, chain):
        return self.twists.fn(chain)


def lift_to_translations(f: AInfFunctor, source=None) -> TranslationLift:
    return TranslationLift(f, source)


def lift_to_sums(f: AInfFunctor, source=None) -> SumLift:
    return SumLift(f, source)


def lift_to_twists(f: AInfFunctor, source=None, bound: int | None = None) -> TwistLift:
    return TwistLift(f, source, bound)


def f_sharp(F: AInfFunctor, source_hull: Pretr | None = None) -> FSharp:
    return FSharp(F, source_hull)
