"""Hom complexes, cohomology, homotopy witnesses, H⁰-isomorphism search, quiver lifts."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Mapping

from .ainf_engine import TableFunctor, check_relation_suite, basis_chains
from .core_algebra import Echelon, nullspace, solve
from .dg_kernel import DgCategory, Morphism


class HomCochainComplex:
    """``Hom(X, Y)`` as a finite cochain complex with explicit matrices."""

    def __init__(self, C: DgCategory, X, Y):
        self.C, self.X, self.Y = C, X, Y
        self.basis = C.hom_basis(X, Y)
        degrees = self.basis.degrees()
        self.lo = min(degrees) - 1 if degrees else 0
        self.hi = max(degrees) + 1 if degrees else 0
        self._index = {d: {k: i for i, k in enumerate(self.basis[d])} for d in degrees}
        self._dcols: dict = {}
        self._image: dict = {}

    def dim(self, n: int) -> int:
        return self.basis.dimension(n)

    def coords(self, m: Morphism) -> dict:
        idx = self._index.get(m.degree, {})
        out = {}
        for k, c in m.coeffs.items():
            if k not in idx:
                raise ValueError(f"{k!r} is not a basis label in degree {m.degree}")
            out[idx[k]] = c
        return out

    def from_coords(self, n: int, vec: Mapping) -> Morphism:
        labels = self.basis[n]
        return Morphism(self.X, self.Y, n, {labels[i]: c for i, c in vec.items()})

    def d_columns(self, n: int) -> list:
        """Coordinates of ``d`` applied to each degree-``n`` basis element."""
        if n not in self._dcols:
            cols = []
            for k in self.basis[n]:
                m = Morphism(self.X, self.Y, n, {k: self.C.field.one})
                cols.append(self.coords(self.C.d(m)))
            self._dcols[n] = cols
        return self._dcols[n]

    def d_matrix(self, n: int) -> list:
        """Dense matrix of ``d: C^n -> C^{n+1}`` (rows index degree n+1)."""
        cols = self.d_columns(n)
        rows = self.dim(n + 1)
        zero = self.C.field.zero
        return [[col.get(r, zero) for col in cols] for r in range(rows)]

    def cocycles(self, n: int) -> list[Morphism]:
        return [self.from_coords(n, v) for v in nullspace(self.d_columns(n), self.C.field.one)]

    def coboundary_echelon(self, n: int) -> Echelon:
        """Echelon form of ``B^n = d(C^{n-1})``."""
        if n not in self._image:
            self._image[n] = Echelon(self.d_columns(n - 1))
        return self._image[n]

    def cohomology_dim(self, n: int) -> int:
        z = self.dim(n) - Echelon(self.d_columns(n)).rank
        return z - self.coboundary_echelon(n).rank

    def is_coboundary(self, m: Morphism) -> bool:
        return self.coboundary_echelon(m.degree).contains(self.coords(m))

    def cohomology_dims(self) -> dict:
        return {n: self.cohomology_dim(n) for n in self.basis.degrees()}

    def check_d_squared(self) -> bool:
        for n in self.basis.degrees():
            for col in self.d_columns(n):
                m = self.from_coords(n + 1, col)
                if not self.C.d(m).is_zero():
                    return False
        return True


def hom_complex(C: DgCategory, X, Y) -> HomCochainComplex:
    return HomCochainComplex(C, X, Y)


def cohomology_dim(K: HomCochainComplex, n: int) -> int:
    return K.cohomology_dim(n)


@dataclass
class HomotopyWitness:
    h: Morphism
    target: Morphism

    def verify(self, C: DgCategory) -> bool:
        return C.d(self.h) == self.target


def solve_coboundary(K: HomCochainComplex, x: Morphism) -> HomotopyWitness | None:
    """Find ``h`` with ``d(h) = x``; the solution with all free coordinates zero."""
    if not K.C.d(x).is_zero():
        raise ValueError("only closed morphisms can be coboundaries")
    n = x.degree
    if x.is_zero():
        return HomotopyWitness(K.C.zero(K.X, K.Y, n - 1), x)
    sol = solve(K.d_columns(n - 1), K.coords(x))
    if sol is None:
        return None
    h = K.from_coords(n - 1, sol)
    if K.C.d(h) != x:
        raise AssertionError("coboundary solver returned a wrong witness")
    return HomotopyWitness(h, x)


# ---------------------------------------------------------------------------


@dataclass
class IsoVerdict:
    status: str  # "isomorphic", "not isomorphic", "undecided"
    witness: Any = None
    certificate: dict = field(default_factory=dict)

    @property
    def isomorphic(self):
        return {"isomorphic": True, "not isomorphic": False}.get(self.status)

    def to_dict(self) -> dict:
        out = {"status": self.status, "certificate": self.certificate}
        if self.witness is not None:
            out["witness"] = {k: repr(v) for k, v in self.witness.items()}
        return out


def _h0_basis(K: HomCochainComplex) -> list[Morphism]:
    """Cocycles spanning a complement of the coboundaries in degree 0."""
    ech = Echelon(K.d_columns(-1))
    out = []
    for z in K.cocycles(0):
        v = K.coords(z)
        rem, _ = ech.reduce(v)
        if rem:
            ech = Echelon(ech.rows + [v])
            out.append(z)
    return out


def decide_h0_isomorphic(C: DgCategory, X, Y, search_depth: int = 1, max_dim: int = 8) -> IsoVerdict:
    """Semi-decide whether ``X`` and ``Y`` are isomorphic in ``H⁰(C)``."""
    if X == Y:
        ident = C.identity(X)
        return IsoVerdict("isomorphic", {"forward": ident, "backward": ident}, {"reason": "equal objects"})

    Kxx, Kyy, Kxy, Kyx = (hom_complex(C, A, B) for A, B in ((X, X), (Y, Y), (X, Y), (Y, X)))
    degrees = sorted(set().union(*(K.basis.degrees() for K in (Kxx, Kyy, Kxy, Kyx))))
    dims = {
        name: {n: K.cohomology_dim(n) for n in degrees}
        for name, K in (("XX", Kxx), ("YY", Kyy), ("XY", Kxy), ("YX", Kyx))
    }
    id_x_exact = Kxx.is_coboundary(C.identity(X))
    id_y_exact = Kyy.is_coboundary(C.identity(Y))
    cert = {
        "closed_degree0_XY": len(Kxy.cocycles(0)),
        "closed_degree0_YX": len(Kyx.cocycles(0)),
        "h0_dims": {k: v.get(0, 0) for k, v in dims.items()},
        "identity_X_is_coboundary": id_x_exact,
        "identity_Y_is_coboundary": id_y_exact,
    }
    if id_x_exact and id_y_exact:
        return IsoVerdict("isomorphic", {"forward": C.zero(X, Y, 0), "backward": C.zero(Y, X, 0)},
                          dict(cert, reason="both objects are zero in H⁰"))
    if id_x_exact != id_y_exact:
        return IsoVerdict("not isomorphic", None, dict(cert, reason="exactly one object is zero in H⁰"))
    if dims["XY"][0] == 0 or dims["YX"][0] == 0:
        return IsoVerdict("not isomorphic", None,
                          dict(cert, reason="no nonzero H⁰ morphism while neither object is zero in H⁰"))
    if not (dims["XX"] == dims["YY"] == dims["XY"] == dims["YX"]):
        return IsoVerdict("not isomorphic", None,
                          dict(cert, reason="cohomology dimensions of the four hom complexes differ",
                               cohomology=dims))

    forward_basis = _h0_basis(Kxy)
    if len(forward_basis) > max_dim:
        return IsoVerdict("undecided", None, dict(cert, reason="H⁰ too large for the lattice search"))
    back_cocycles = Kyx.cocycles(0)
    for coeffs in itertools.product(range(-search_depth, search_depth + 1), repeat=len(forward_basis)):
        if not any(coeffs):
            continue
        u = C.zero(X, Y, 0)
        for c, z in zip(coeffs, forward_basis):
            u = u + C.field(c) * z
        # unknowns: coefficients of v, then homotopies on X and on Y
        columns = []
        for z in back_cocycles:
            columns.append(_stack(Kxx.coords(C.compose(z, u)), Kyy.coords(C.compose(u, z))))
        for col in Kxx.d_columns(-1):
            columns.append(_stack({k: -v for k, v in col.items()}, {}))
        for col in Kyy.d_columns(-1):
            columns.append(_stack({}, {k: -v for k, v in col.items()}))
        rhs = _stack(Kxx.coords(C.identity(X)), Kyy.coords(C.identity(Y)))
        sol = solve(columns, rhs)
        if sol is None:
            continue
        v = C.zero(Y, X, 0)
        for idx, z in enumerate(back_cocycles):
            if idx in sol:
                v = v + sol[idx] * z
        return IsoVerdict("isomorphic", {"forward": u, "backward": v},
                          dict(cert, reason="lattice search found inverse classes"))
    return IsoVerdict("undecided", None, dict(cert, reason=f"no witness with coefficients up to {search_depth}"))


def _stack(a: dict, b: dict) -> dict:
    out = {("X", k): v for k, v in a.items()}
    out.update({("Y", k): v for k, v in b.items()})
    return out


# ---------------------------------------------------------------------------


class QuiverLiftError(ValueError):
    pass


@dataclass
class QuiverLift:
    functor: TableFunctor
    homotopies: dict
    notes: list
    certificate: Any


def _longest_basis_chain(Q, cap: int = 3) -> int:
    """Length of the longest composable chain of non-identity basis morphisms, capped."""
    objs = list(Q.test_objects())
    succ = {X: [Y for Y in objs if Y != X and Q.hom_basis(X, Y).dimension()] for X in objs}
    best = 0

    def walk(X, depth):
        nonlocal best
        best = max(best, depth)
        if depth < cap:
            for Y in succ[X]:
                walk(Y, depth + 1)

    for X in objs:
        walk(X, 0)
    return best


def quiver_functor_lift(
    Q,
    target: DgCategory,
    objects: Mapping,
    arrows: Mapping,
    pins: Mapping | None = None,
    representatives: Mapping | None = None,
    name: str = "quiver lift",
) -> QuiverLift:
    """Lift a functor ``Q -> H⁰(target)`` to an A∞-functor when quiver paths have length ≤ 2.

    ``arrows`` gives closed degree-0 representatives of the images of the
    arrows.  Basis paths of length 2 default to the composite of the arrow
    representatives; ``representatives`` overrides any basis path.  ``pins``
    fixes the homotopy for a pair of basis paths (keys are pairs of path
    tuples); a pinned element may solve the equation up to sign, in which case
    the sign is corrected and noted.
    """
    longest = getattr(Q, "max_path_length", None)
    if longest is None:
        longest = _longest_basis_chain(Q)
    if longest > 2:
        raise QuiverLiftError(
            f"quiver has paths of length {longest}; the construction needs length at most 2"
        )
    pins = dict(pins or {})
    representatives = dict(representatives or {})
    notes = []
    f1: dict = {}

    def rep(X, Y, key) -> Morphism:
        if key in representatives:
            return representatives[key]
        if len(key) == 1:
            return arrows[key[0]]
        m = arrows[key[0]]
        for a in key[1:]:
            m = target.compose(m, arrows[a])
        return m

    for X in Q.test_objects():
        for Y in Q.test_objects():
            if X == Y:
                continue
            for m in Q.basis_morphisms(X, Y):
                (key,) = m.coeffs
                r = rep(X, Y, key)
                if r.degree != 0 or r.source != objects[X] or r.target != objects[Y]:
                    raise QuiverLiftError(f"representative for {key} lives in the wrong hom space")
                if not target.d(r).is_zero():
                    raise QuiverLiftError(f"representative for {key} is not closed")
                f1[(X, Y, key)] = r

    def F1(m: Morphism) -> Morphism:
        out = target.zero(objects[m.source], objects[m.target], 0)
        for k, c in m.coeffs.items():
            if m.source == m.target:
                out = out + c * target.identity(objects[m.source])
            else:
                out = out + c * f1[(m.source, m.target, k)]
        return out

    f2: dict = {}
    homotopies: dict = {}
    for chain in basis_chains(Q, Q.test_objects(), 2):
        a, b = chain
        if a.source == a.target or b.source == b.target:
            continue
        defect = F1(Q.compose(a, b)) - target.compose(F1(a), F1(b))
        (ka,), (kb,) = a.coeffs, b.coeffs
        K = hom_complex(target, defect.source, defect.target)
        pin = pins.get((ka, kb))
        if pin is not None:
            dp = target.d(pin)
            if dp == defect:
                h = pin
            elif dp == -defect:
                h = -pin
                notes.append(f"pinned homotopy for ({_fmt(ka)}, {_fmt(kb)}) used with opposite sign")
            else:
                raise QuiverLiftError(f"pinned element for ({_fmt(ka)}, {_fmt(kb)}) does not bound the defect")
        else:
            witness = solve_coboundary(K, defect)
            if witness is None:
                raise QuiverLiftError(
                    f"defect on ({_fmt(ka)}, {_fmt(kb)}) is not a coboundary: the table is not a functor to H⁰"
                )
            h = witness.h
        homotopies[(ka, kb)] = h
        if not h.is_zero():
            f2[((a.source, a.target, ka), (b.source, b.target, kb))] = -h
    unused = set(pins) - set(homotopies)
    if unused:
        raise QuiverLiftError(f"pins for pairs that are not composable basis paths: {sorted(unused)}")

    F = TableFunctor(Q, target, objects, {1: f1, 2: f2}, name=name)
    F.support_bound = 2
    certificate = check_relation_suite(F, Q.test_objects(), max_length=3)
    if not certificate.ok:
        raise AssertionError(f"lifted functor violates the A∞ relation: {certificate.failures[:1]}")
    return QuiverLift(F, homotopies, notes, certificate)


def _fmt(key) -> str:
    return "*".join(key) if isinstance(key, tuple) else str(key)
