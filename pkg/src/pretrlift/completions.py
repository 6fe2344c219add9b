"""Direct-sum, translation and twisted-complex completions, and the pretriangulated hull.

Object terms:

* ``Shift(A, i)``      the formal translate ``A[i]``
* ``DirectSum((A, B, ...))`` a finite formal sum, possibly empty
* ``Twisted(A, q)``    ``A`` with its differential twisted by ``q``

Hull objects always have the layered form
``Twisted(DirectSum((Shift(A_1, t_1), ...)), q)`` with base objects ``A_k``.
Morphism keys in the hull are ``(row, column, base_key)``; entry ``(j, i)``
runs from summand ``i`` to summand ``j`` and carries the decoration
``⟨t_j · t_i⟩`` implicitly through the summand shifts.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core_algebra import GradedBasis, parity_sign
from .dg_kernel import DgCategory, Morphism, sort_key


class CompletionError(ValueError):
    pass


@dataclass(frozen=True)
class Shift:
    obj: object
    shift: int

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((self.obj, self.shift))
            object.__setattr__(self, "_hash", h)
            return h

    def __repr__(self):
        return f"{self.obj}[{self.shift}]" if self.shift else f"{self.obj}[0]"


@dataclass(frozen=True)
class DirectSum:
    summands: tuple

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash(self.summands)
            object.__setattr__(self, "_hash", h)
            return h

    def __repr__(self):
        if not self.summands:
            return "0"
        return " ⊕ ".join(map(repr, self.summands))


@dataclass(frozen=True)
class Twisted:
    obj: object
    q: Morphism

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((self.obj, self.q))
            object.__setattr__(self, "_hash", h)
            return h

    def __repr__(self):
        if self.q.is_zero():
            return f"{{{self.obj}}}"
        return f"{{{self.obj} | {len(self.q.coeffs)} twist terms}}"


# ---------------------------------------------------------------------------


class TranslationCompletion(DgCategory):
    """Formal translates ``A[i]`` with ``|⟨j α i⟩| = |α| + i - j``."""

    def __init__(self, base: DgCategory, shifts: Sequence[int] = (0, -1)):
        super().__init__(base.field)
        self.base = base
        self.name = f"{base.name}^[.]"
        self.shifts = tuple(shifts)

    def _check(self, X):
        if not isinstance(X, Shift):
            raise CompletionError(f"{X!r} is not a translate")

    def _hom_basis(self, X, Y):
        self._check(X)
        self._check(Y)
        inner = self.base.hom_basis(X.obj, Y.obj)
        return GradedBasis({d + X.shift - Y.shift: inner[d] for d in inner.degrees()})

    def under(self, m: Morphism) -> Morphism:
        """The underlying base morphism ``α`` of ``⟨j α i⟩``."""
        return Morphism(m.source.obj, m.target.obj, m.degree - m.source.shift + m.target.shift, m.coeffs)

    def wrap(self, alpha: Morphism, j: int, i: int) -> Morphism:
        """``⟨j α i⟩``."""
        return Morphism(Shift(alpha.source, i), Shift(alpha.target, j), alpha.degree + i - j, alpha.coeffs)

    def _d(self, m):
        j = m.target.shift
        dalpha = self.base.d(self.under(m))
        return Morphism(m.source, m.target, m.degree + 1, (parity_sign(j) * dalpha).coeffs)

    def _compose(self, a, b):
        ab = self.base.compose(self.under(a), self.under(b))
        return Morphism(b.source, a.target, a.degree + b.degree, ab.coeffs)

    def identity(self, X):
        self._check(X)
        return Morphism(X, X, 0, self.base.identity(X.obj).coeffs)

    def test_objects(self):
        return [Shift(A, s) for s in self.shifts for A in self.base.test_objects()]

    def format_key(self, key):
        return getattr(self.base, "format_key", str)(key)


class SumCompletion(DgCategory):
    """Finite formal direct sums with matrix morphisms."""

    def __init__(self, base: DgCategory, objects: Sequence | None = None):
        super().__init__(base.field)
        self.base = base
        self.name = f"{base.name}^+"
        self._objects = objects

    def _check(self, X):
        if not isinstance(X, DirectSum):
            raise CompletionError(f"{X!r} is not a formal sum")

    def _hom_basis(self, X, Y):
        self._check(X)
        self._check(Y)
        by_deg: dict = {}
        for j, B in enumerate(Y.summands):
            for i, A in enumerate(X.summands):
                inner = self.base.hom_basis(A, B)
                for d in inner.degrees():
                    by_deg.setdefault(d, []).extend((j, i, k) for k in inner[d])
        return GradedBasis(by_deg)

    def entries(self, m: Morphism) -> dict:
        """``{(j, i): base morphism}`` for the nonzero entries."""
        grouped: dict = {}
        for (j, i, k), c in m.coeffs.items():
            grouped.setdefault((j, i), {})[k] = c
        X, Y = m.source.summands, m.target.summands
        return {
            (j, i): Morphism(X[i], Y[j], m.degree, coeffs)
            for (j, i), coeffs in sorted(grouped.items())
        }

    def from_entries(self, X, Y, degree: int, entries: Mapping) -> Morphism:
        coeffs = {}
        for (j, i), e in entries.items():
            if e.is_zero():
                continue
            if e.degree != degree or e.source != X.summands[i] or e.target != Y.summands[j]:
                raise CompletionError(f"entry ({j},{i}) does not fit the matrix shape")
            for k, c in e.coeffs.items():
                coeffs[(j, i, k)] = c
        return Morphism(X, Y, degree, coeffs)

    def _d(self, m):
        out = {}
        for (j, i), e in self.entries(m).items():
            for k, c in self.base.d(e).coeffs.items():
                out[(j, i, k)] = c
        return Morphism(m.source, m.target, m.degree + 1, out)

    def _compose(self, a, b):
        ea, eb = self.entries(a), self.entries(b)
        by_col: dict = {}
        for (l, j), e in ea.items():
            by_col.setdefault(j, []).append((l, e))
        out: dict = {}
        for (j, i), f in eb.items():
            for l, e in by_col.get(j, ()):
                for k, c in self.base.compose(e, f).coeffs.items():
                    key = (l, i, k)
                    out[key] = out.get(key, 0) + c
        return Morphism(b.source, a.target, a.degree + b.degree, out)

    def identity(self, X):
        self._check(X)
        out = {}
        for i, A in enumerate(X.summands):
            for k, c in self.base.identity(A).coeffs.items():
                out[(i, i, k)] = c
        return Morphism(X, X, 0, out)

    def test_objects(self):
        if self._objects is not None:
            return list(self._objects)
        objs = self.base.test_objects()
        out = [DirectSum(())] + [DirectSum((A,)) for A in objs]
        out += [DirectSum((objs[0], objs[-1]))]
        if len(objs) > 1:
            out.append(DirectSum((objs[-1], objs[0])))
        return out

    def format_key(self, key):
        j, i, k = key
        return f"[{j},{i}]{getattr(self.base, 'format_key', str)(k)}"


def check_maurer_cartan(C: DgCategory, q: Morphism):
    """Return ``(holds, residual)`` for ``d(q) + q∘q``."""
    if q.degree != 1:
        raise CompletionError(f"twisting morphism has degree {q.degree}, expected 1")
    if q.source != q.target:
        raise CompletionError("twisting morphism is not an endomorphism")
    residual = C.d(q) + C.compose(q, q)
    return residual.is_zero(), residual


class TwistCompletion(DgCategory):
    """Twisted complexes ``{A, q}`` over a dg category."""

    def __init__(self, base: DgCategory, objects: Sequence | None = None):
        super().__init__(base.field)
        self.base = base
        self.name = f"Tw({base.name})"
        self._objects = objects

    def make_object(self, A, q: Morphism | None = None) -> Twisted:
        if q is None:
            q = self.base.zero(A, A, 1)
        if q.source != A or q.target != A:
            raise CompletionError("twist endpoints do not match the object")
        ok, residual = check_maurer_cartan(self.base, q)
        if not ok:
            raise CompletionError(f"Maurer-Cartan equation fails, residual {residual}")
        return Twisted(A, q)

    def _check(self, X):
        if not isinstance(X, Twisted):
            raise CompletionError(f"{X!r} is not a twisted object")

    def _hom_basis(self, X, Y):
        self._check(X)
        self._check(Y)
        return self.base.hom_basis(X.obj, Y.obj)

    def under(self, m: Morphism) -> Morphism:
        return Morphism(m.source.obj, m.target.obj, m.degree, m.coeffs)

    def _d(self, m):
        alpha = self.under(m)
        p, q = m.source.q, m.target.q
        total = self.base.d(alpha)
        if not q.is_zero():
            total = total + self.base.compose(q, alpha)
        if not p.is_zero():
            total = total + parity_sign(m.degree + 1) * self.base.compose(alpha, p)
        return Morphism(m.source, m.target, m.degree + 1, total.coeffs)

    def _compose(self, a, b):
        ab = self.base.compose(self.under(a), self.under(b))
        return Morphism(b.source, a.target, a.degree + b.degree, ab.coeffs)

    def identity(self, X):
        self._check(X)
        return Morphism(X, X, 0, self.base.identity(X.obj).coeffs)

    def test_objects(self):
        if self._objects is not None:
            return list(self._objects)
        return [self.make_object(A) for A in self.base.test_objects()]

    def format_key(self, key):
        return getattr(self.base, "format_key", str)(key)


def direct_sum_completion(A: DgCategory, objects=None) -> SumCompletion:
    return SumCompletion(A, objects)


def translation_completion(A: DgCategory, shifts=(0, -1)) -> TranslationCompletion:
    return TranslationCompletion(A, shifts)


def twist_completion(A: DgCategory, objects=None) -> TwistCompletion:
    return TwistCompletion(A, objects)


# ---------------------------------------------------------------------------


class Pretr(TwistCompletion):
    """One-sided twisted complexes over sums of translates of base objects.

    Besides the dg structure this class implements the target-side structure
    the lift constructions need: translates, direct sums and twists of its own
    objects, each realised on the nose.
    """

    def __init__(self, base: DgCategory, objects: Sequence | None = None, shifts=(0, -1)):
        self.trans = TranslationCompletion(base, shifts)
        self.sums = SumCompletion(self.trans)
        super().__init__(self.sums)
        self.ground = base
        self.name = f"pretr({base.name})"
        self._extra = list(objects or [])

    # -- objects -------------------------------------------------------------
    def summands(self, X: Twisted) -> list:
        """``[(base object, shift), ...]`` of a hull object."""
        return [(s.obj, s.shift) for s in X.obj.summands]

    def is_one_sided(self, X) -> bool:
        if not isinstance(X, Twisted) or not isinstance(X.obj, DirectSum):
            return False
        if not all(isinstance(s, Shift) for s in X.obj.summands):
            return False
        return all(j > i for (j, i, _k) in X.q.coeffs)

    def complex(self, summands: Sequence, entries: Mapping | None = None, check: bool = True) -> Twisted:
        """Build ``{⊕ A_k[t_k], q}`` from ``(A_k, t_k)`` pairs and base entries.

        ``entries[(j, i)]`` is the base morphism ``α`` of ``q_ji = ⟨t_j α t_i⟩``.
        """
        S = DirectSum(tuple(Shift(A, t) for A, t in summands))
        coeffs = {}
        for (j, i), alpha in (entries or {}).items():
            tj, ti = S.summands[j].shift, S.summands[i].shift
            if alpha.is_zero():
                continue
            if alpha.source != S.summands[i].obj or alpha.target != S.summands[j].obj:
                raise CompletionError(f"entry ({j},{i}) has wrong endpoints")
            if alpha.degree + ti - tj != 1:
                raise CompletionError(
                    f"entry ({j},{i}) has decorated degree {alpha.degree + ti - tj}, expected 1"
                )
            for k, c in alpha.coeffs.items():
                coeffs[(j, i, k)] = c
        q = Morphism(S, S, 1, coeffs)
        X = self.make_object(S, q)
        if check and not self.is_one_sided(X):
            raise CompletionError("twist matrix is not strictly lower triangular")
        return X

    def embed_object(self, A) -> Twisted:
        S = DirectSum((Shift(A, 0),))
        return Twisted(S, Morphism(S, S, 1))

    zero_object = property(lambda self: Twisted(DirectSum(()), Morphism(DirectSum(()), DirectSum(()), 1)))

    def embed(self, beta: Morphism) -> Morphism:
        X, Y = self.embed_object(beta.source), self.embed_object(beta.target)
        return Morphism(X, Y, beta.degree, {(0, 0, k): c for k, c in beta.coeffs.items()})

    def entries(self, m: Morphism) -> dict:
        """``{(j, i): base morphism α}`` with entry ``⟨t_j α t_i⟩``."""
        grouped: dict = {}
        for (j, i, k), c in m.coeffs.items():
            grouped.setdefault((j, i), {})[k] = c
        X, Y = _summands_of(m.source), _summands_of(m.target)
        return {
            (j, i): Morphism(X[i].obj, Y[j].obj, m.degree - X[i].shift + Y[j].shift, coeffs)
            for (j, i), coeffs in sorted(grouped.items())
        }

    def from_entries(self, X, Y, degree: int, entries: Mapping) -> Morphism:
        coeffs = {}
        for (j, i), alpha in entries.items():
            for k, c in alpha.coeffs.items():
                coeffs[(j, i, k)] = c
        return Morphism(X, Y, degree, coeffs)

    def check_member(self, X) -> None:
        if not self.is_one_sided(X):
            raise CompletionError(f"{X!r} is not a one-sided twisted complex")

    # -- structure used by the lifts ----------------------------------------------
    def shift(self, X: Twisted, n: int) -> Twisted:
        """``X[n]``; the twist picks up the sign ``(-1)^n``."""
        if n == 0:
            return X
        S = DirectSum(tuple(Shift(s.obj, s.shift + n) for s in X.obj.summands))
        q = Morphism(S, S, 1, {k: parity_sign(n) * c for k, c in X.q.coeffs.items()})
        return Twisted(S, q)

    def translate(self, beta: Morphism, j: int, i: int) -> Morphism:
        """``⟨j β i⟩ : X[i] -> Y[j]`` for ``β : X -> Y``."""
        if i == 0 and j == 0:
            return beta
        return Morphism(
            self.shift(beta.source, i), self.shift(beta.target, j), beta.degree + i - j, beta.coeffs
        )

    def direct_sum(self, objs: Sequence[Twisted]) -> Twisted:
        if len(objs) == 1:
            return objs[0]
        summands = tuple(s for X in objs for s in X.obj.summands)
        S = DirectSum(summands)
        coeffs = {}
        offset = 0
        for X in objs:
            for (j, i, k), c in X.q.coeffs.items():
                coeffs[(j + offset, i + offset, k)] = c
            offset += len(X.obj.summands)
        return Twisted(S, Morphism(S, S, 1, coeffs))

    def matrix(self, blocks: Mapping, sources: Sequence, targets: Sequence, degree: int) -> Morphism:
        """Assemble ``(β_nm)`` with ``β_nm : sources[m] -> targets[n]`` into one morphism."""
        X, Y = self.direct_sum(sources), self.direct_sum(targets)
        if len(sources) == 1 and len(targets) == 1:
            beta = blocks.get((0, 0))
            if beta is None:
                return Morphism(X, Y, degree)
            if beta.degree != degree:
                raise CompletionError("block of the wrong degree")
            return beta
        src_off = list(itertools.accumulate((len(S.obj.summands) for S in sources), initial=0))
        tgt_off = list(itertools.accumulate((len(T.obj.summands) for T in targets), initial=0))
        coeffs = {}
        for (n, m), beta in blocks.items():
            if beta.is_zero():
                continue
            if beta.degree != degree or beta.source != sources[m] or beta.target != targets[n]:
                raise CompletionError(f"block ({n},{m}) does not fit")
            for (j, i, k), c in beta.coeffs.items():
                coeffs[(j + tgt_off[n], i + src_off[m], k)] = c
        return Morphism(X, Y, degree, coeffs)

    def twist(self, X: Twisted, q: Morphism) -> Twisted:
        """``{X, q}`` for a Maurer-Cartan endomorphism ``q`` of ``X``; merges the twists."""
        if q.source != X or q.target != X or q.degree != 1:
            raise CompletionError("twist must be a degree 1 endomorphism of the object")
        merged = X.q + Morphism(X.obj, X.obj, 1, q.coeffs)
        return self.make_object(X.obj, merged)

    def twisted_morphism(self, beta: Morphism, X: Twisted, Y: Twisted) -> Morphism:
        """``{q β p}``: the same underlying matrix between twisted objects."""
        if X.obj != beta.source.obj or Y.obj != beta.target.obj:
            raise CompletionError("twisted morphism changes the underlying objects")
        return Morphism(X, Y, beta.degree, beta.coeffs)

    def normalize(self, expr) -> Twisted:
        """Bring a nested object term into layered form."""
        if isinstance(expr, Twisted):
            if isinstance(expr.obj, DirectSum) and all(
                isinstance(s, Shift) and not isinstance(s.obj, (Shift, DirectSum, Twisted))
                for s in expr.obj.summands
            ):
                return self.make_object(expr.obj, expr.q)
            inner = self.normalize(expr.obj)
            if expr.q.source != inner:
                raise CompletionError("twist of a non-normal object must be given on its normal form")
            return self.twist(inner, expr.q)
        if isinstance(expr, Shift):
            return self.shift(self.normalize(expr.obj), expr.shift)
        if isinstance(expr, DirectSum):
            return self.direct_sum([self.normalize(e) for e in expr.summands]) if expr.summands else self.zero_object
        return self.embed_object(expr)

    def normalize_order(self, X: Twisted):
        """Reorder summands so the twist becomes strictly lower triangular.

        Returns ``(Y, iso)`` with ``iso : X -> Y`` the closed permutation
        isomorphism.  Raises when no ordering works.
        """
        n = len(X.obj.summands)
        succ = {i: set() for i in range(n)}
        indeg = [0] * n
        for (j, i, _k) in X.q.coeffs:
            if j == i:
                raise CompletionError("twist has a diagonal entry; no ordering is one-sided")
            if j not in succ[i]:
                succ[i].add(j)
                indeg[j] += 1
        heap = [i for i in range(n) if indeg[i] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            i = heapq.heappop(heap)
            order.append(i)
            for j in succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    heapq.heappush(heap, j)
        if len(order) != n:
            raise CompletionError("twist has a cycle; no ordering is one-sided")
        pos = {old: new for new, old in enumerate(order)}
        S = DirectSum(tuple(X.obj.summands[i] for i in order))
        q = Morphism(S, S, 1, {(pos[j], pos[i], k): c for (j, i, k), c in X.q.coeffs.items()})
        Y = self.make_object(S, q)
        iso = {}
        for old, s in enumerate(X.obj.summands):
            for k, c in self.ground.identity(s.obj).coeffs.items():
                iso[(pos[old], old, k)] = c
        return Y, Morphism(X, Y, 0, iso)

    # -- test objects ---------------------------------------------------------------
    def test_objects(self):
        if self._objects is not None:
            return list(self._objects)
        objs = [self.embed_object(A) for A in self.ground.test_objects()]
        return objs + [X for X in self._extra if X not in objs]

    def set_test_objects(self, objs) -> None:
        self._objects = list(objs)

    def format_key(self, key):
        j, i, k = key
        return f"[{j},{i}]{getattr(self.ground, 'format_key', str)(k)}"


def _summands_of(X) -> tuple:
    return X.obj.summands if isinstance(X, Twisted) else X.summands


def pretriangulated_hull(A: DgCategory, objects=None) -> Pretr:
    return Pretr(A, objects)


def cone_objects(P: Pretr, limit: int = 2) -> list:
    """Cones ``[A -> B]`` of the first few nonzero degree-0 base basis morphisms."""
    out = []
    base = P.ground
    for A in base.test_objects():
        for B in base.test_objects():
            if A == B:
                continue
            for m in base.basis_morphisms(A, B, 0):
                out.append(P.complex([(A, 0), (B, -1)], {(1, 0): m}))
                break
            if len(out) >= limit:
                return out
    return out


def iter_entries_sorted(entries: Mapping) -> Iterable:
    return sorted(entries.items(), key=lambda kv: sort_key(kv[0]))
