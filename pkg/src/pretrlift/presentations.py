"""Path categories of quivers with relations, dg quivers, Künneth products.

A path is stored as a tuple of arrow names in composition order: ``("x0", "y1")``
is ``x0 ∘ y1``, so ``y1`` is applied first.  The empty tuple is an identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .core_algebra import QQ, Echelon, Field, GradedBasis, parity_sign
from .dg_kernel import DgCategory, Morphism


class PresentationError(ValueError):
    """Raised for malformed or inconsistent presentations."""


@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    dst: str
    deg: int = 0


@dataclass
class QuiverPresentation:
    """Vertices, arrows and relations.

    Relations and differentials are linear combinations ``{path: scalar}``; use
    :func:`parse_combination` to build them from strings like ``"x0*y1 - x1*y0"``.
    """

    vertices: list
    arrows: list
    relations: list = field(default_factory=list)
    differentials: dict = field(default_factory=dict)
    name: str = "quiver"


DgQuiverPresentation = QuiverPresentation

_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def format_path(path: tuple) -> str:
    return "*".join(path) if path else "id"


def parse_combination(text: str, field: Field = QQ) -> dict:
    """Parse ``"2*x0*y1 - x1*y0"`` into ``{("x0","y1"): 2, ("x1","y0"): -1}``.

    A leading numeric factor (``3``, ``1/2``) is a coefficient; ``id`` is the
    identity path; ``0`` is the empty combination.
    """
    text = text.strip()
    if not text:
        raise PresentationError("empty expression")
    out: dict = {}
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise PresentationError(f"cannot parse {text!r} at column {pos + 1}")
        sign = -1 if m.group(1) == "-" else 1
        factors = [f.strip() for f in m.group(2).split("*")]
        if any(not f for f in factors):
            raise PresentationError(f"empty factor in {text!r} near column {m.start(2) + 1}")
        coeff = Fraction(sign)
        names = []
        for f in factors:
            if re.fullmatch(r"\d+(/\d+)?", f):
                if names:
                    raise PresentationError(f"scalar {f!r} must lead its term in {text!r}")
                coeff *= Fraction(f)
            elif f in ("id", "1"):
                continue
            else:
                names.append(f)
        path = tuple(names)
        if coeff != 0:
            out[path] = out.get(path, 0) + field(coeff)
        pos = m.end()
    return {k: v for k, v in out.items() if v != 0}


class PathCategory(DgCategory):
    """Path category of a finite acyclic (dg) quiver modulo a two-sided ideal."""

    def __init__(self, p: QuiverPresentation, field: Field = QQ, length_cap: int = 32, validate: bool = True):
        super().__init__(field)
        self.presentation = p
        self.name = p.name
        self.vertices = list(p.vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise PresentationError("duplicate vertex labels")
        self.arrows = {a.name: a for a in p.arrows}
        if len(self.arrows) != len(p.arrows):
            raise PresentationError("duplicate arrow names")
        for a in p.arrows:
            if a.src not in self.vertices or a.dst not in self.vertices:
                raise PresentationError(f"arrow {a.name} has unknown endpoint")
            if not a.name or re.search(r"[\s*+\-()]", a.name) or a.name in ("id", "0", "1"):
                raise PresentationError(f"arrow name {a.name!r} is not usable in path expressions")
        self.length_cap = length_cap
        self._check_acyclic()
        self._paths = self._enumerate_paths()
        self.max_path_length = max((len(k) for ps in self._paths.values() for k in ps), default=0)
        self._build_quotient(p.relations)
        self._arrow_d = {}
        for name, combo in p.differentials.items():
            if name not in self.arrows:
                raise PresentationError(f"differential given for unknown arrow {name}")
            self._arrow_d[name] = {k: field(v) for k, v in combo.items() if v != 0}
        self.is_dg = bool(self._arrow_d) or any(a.deg for a in p.arrows)
        if validate:
            self._validate_differential()

    # -- construction -------------------------------------------------------
    def _check_acyclic(self) -> None:
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows.values():
            indeg[a.dst] += 1
        ready = sorted(v for v, n in indeg.items() if n == 0)
        seen = 0
        out = {v: [a for a in self.arrows.values() if a.src == v] for v in self.vertices}
        while ready:
            v = ready.pop()
            seen += 1
            for a in out[v]:
                indeg[a.dst] -= 1
                if indeg[a.dst] == 0:
                    ready.append(a.dst)
        if seen != len(self.vertices):
            raise PresentationError("quiver has an oriented cycle")

    def _enumerate_paths(self) -> dict:
        """All paths per endpoint pair, grouped, up to the length cap."""
        paths = {(v, w): [] for v in self.vertices for w in self.vertices}
        frontier = []
        for v in self.vertices:
            paths[(v, v)].append(())
            frontier.append((v, v, ()))
        length = 0
        while frontier:
            length += 1
            if length > self.length_cap:
                raise PresentationError(f"paths longer than the cap {self.length_cap} exist")
            nxt = []
            for v, w, path in frontier:
                for a in self.arrows.values():
                    if a.src == w:
                        new = (a.name,) + path
                        paths[(v, a.dst)].append(new)
                        nxt.append((v, a.dst, new))
            frontier = nxt
        return paths

    def path_degree(self, path: tuple) -> int:
        return sum(self.arrows[a].deg for a in path)

    def path_endpoints(self, path: tuple) -> tuple:
        if not path:
            raise ValueError("identity path has no intrinsic endpoints")
        return self.arrows[path[-1]].src, self.arrows[path[0]].dst

    def _path_order(self, path: tuple):
        return (len(path), path)

    def _build_quotient(self, relations) -> None:
        rel_list = []
        for rel in relations:
            if not rel:
                continue
            ends = set()
            for path in rel:
                if not path:
                    raise PresentationError("identity paths may not appear in relations")
                for a in path:
                    if a not in self.arrows:
                        raise PresentationError(f"relation mentions unknown arrow {a}")
                self._check_composable(path)
                ends.add((self.path_endpoints(path), self.path_degree(path)))
            if len(ends) != 1:
                raise PresentationError(
                    f"inconsistent relation: paths {sorted(map(format_path, rel))} have different endpoints or degrees"
                )
            rel_list.append(({k: self.field(v) for k, v in rel.items()}, ends.pop()[0]))

        self._normal: dict = {}
        self._basis: dict = {}
        for (v, w), plist in self._paths.items():
            ordered = sorted(plist, key=self._path_order, reverse=True)
            col = {p: i for i, p in enumerate(ordered)}
            rows = []
            for rel, (a, b) in rel_list:
                for s in self._paths[(v, a)]:
                    for u in self._paths[(b, w)]:
                        rows.append({col[u + p + s]: c for p, c in rel.items()})
            ech = Echelon(rows)
            pivots = set(ech.pivots)
            basis_paths = sorted((p for p in ordered if col[p] not in pivots), key=self._path_order)
            for row, piv in zip(ech.rows, ech.pivots):
                self._normal[ordered[piv]] = {ordered[j]: -c for j, c in row.items() if j != piv}
            for p in basis_paths:
                self._normal[p] = {p: self.field.one}
            by_deg: dict = {}
            for p in basis_paths:
                by_deg.setdefault(self.path_degree(p), []).append(p)
            self._basis[(v, w)] = GradedBasis(by_deg)
        self.max_nonzero_length = max(
            (len(k) for b in self._basis.values() for d in b.degrees() for k in b[d]), default=0
        )

    def _check_composable(self, path: tuple) -> None:
        for left, right in zip(path, path[1:]):
            if self.arrows[right].dst != self.arrows[left].src:
                raise PresentationError(f"path {format_path(path)} is not composable")

    def _validate_differential(self) -> None:
        for name, combo in self._arrow_d.items():
            a = self.arrows[name]
            for path in combo:
                if not path:
                    raise PresentationError(f"d({name}) may not contain an identity")
                self._check_composable(path)
                if self.path_endpoints(path) != (a.src, a.dst):
                    raise PresentationError(f"d({name}) has a term with wrong endpoints")
                if self.path_degree(path) != a.deg + 1:
                    raise PresentationError(
                        f"d({name}) has degree {self.path_degree(path)}, expected {a.deg + 1}"
                    )
        for rel in self.presentation.relations:
            image: dict = {}
            for path, c in rel.items():
                for q, e in self._d_path(path).items():
                    image[q] = image.get(q, 0) + c * e
            if self.reduce(image):
                raise PresentationError("differential does not preserve the relations")
        for (v, w), basis in self._basis.items():
            for deg in basis.degrees():
                for path in basis[deg]:
                    once = self.reduce(self._d_path(path))
                    twice: dict = {}
                    for q, c in once.items():
                        for r, e in self._d_path(q).items():
                            twice[r] = twice.get(r, 0) + c * e
                    if self.reduce(twice):
                        raise PresentationError(f"d^2 != 0 on {format_path(path)}")

    # -- linear algebra on paths -------------------------------------------
    def reduce(self, combo: Mapping) -> dict:
        """Normal form of a combination of (composable) paths."""
        out: dict = {}
        for path, c in combo.items():
            if c == 0:
                continue
            normal = self._normal.get(path) if path else {(): 1}
            if normal is None:
                raise ValueError(f"{format_path(path)} is not a path of this quiver")
            for q, e in normal.items():
                out[q] = out.get(q, 0) + c * e
        return {k: v for k, v in out.items() if v != 0}

    def _d_path(self, path: tuple) -> dict:
        out: dict = {}
        passed = 0
        for i, name in enumerate(path):
            da = self._arrow_d.get(name)
            if da:
                sign = parity_sign(passed)
                left, right = path[:i], path[i + 1:]
                for q, c in da.items():
                    key = left + q + right
                    out[key] = out.get(key, 0) + sign * c
            passed += self.arrows[name].deg
        return out

    # -- DgCategory interface --------------------------------------------------
    def _hom_basis(self, X, Y):
        try:
            return self._basis[(X, Y)]
        except KeyError:
            raise KeyError(f"unknown objects {X!r}, {Y!r} in {self.name}") from None

    def identity(self, X):
        if X not in self.vertices:
            raise KeyError(f"unknown object {X!r}")
        return Morphism(X, X, 0, {(): self.field.one})

    def _d(self, m):
        out: dict = {}
        for path, c in m.coeffs.items():
            for q, e in self._d_path(path).items():
                out[q] = out.get(q, 0) + c * e
        return Morphism(m.source, m.target, m.degree + 1, self.reduce(out))

    def _compose(self, a, b):
        out: dict = {}
        for p, c in a.coeffs.items():
            for q, e in b.coeffs.items():
                for r, f in self._normal_concat(p, q).items():
                    out[r] = out.get(r, 0) + c * e * f
        return Morphism(b.source, a.target, a.degree + b.degree, {k: v for k, v in out.items() if v != 0})

    def _normal_concat(self, p: tuple, q: tuple) -> dict:
        if not p:
            return {q: 1}
        if not q:
            return {p: 1}
        return self._normal[p + q]

    def test_objects(self):
        return list(self.vertices)

    def path(self, text: str, source=None, target=None) -> Morphism:
        """Morphism from a path expression such as ``"x0*y1 - x1*y0"``."""
        combo = parse_combination(text, self.field)
        return self.from_paths(combo, source, target)

    def from_paths(self, combo: Mapping, source=None, target=None) -> Morphism:
        nonid = [p for p in combo if p]
        if nonid:
            s, t = self.path_endpoints(nonid[0])
            source = s if source is None else source
            target = t if target is None else target
        if source is None or target is None:
            raise PresentationError("endpoints of an identity or zero expression must be given")
        for p in combo:
            if p:
                self._check_composable(p)
                if self.path_endpoints(p) != (source, target):
                    raise PresentationError(f"{format_path(p)} does not run {source} -> {target}")
            elif source != target:
                raise PresentationError("identity between different vertices")
        degrees = {self.path_degree(p) for p in combo}
        if len(degrees) > 1:
            raise PresentationError("expression is not homogeneous")
        degree = degrees.pop() if degrees else 0
        return Morphism(source, target, degree, self.reduce(combo))

    def format_key(self, key) -> str:
        return format_path(key)


def build_path_category(p: QuiverPresentation, field: Field = QQ, length_cap: int = 32) -> PathCategory:
    """Path category of a quiver with relations, concentrated in degree 0."""
    if p.differentials or any(a.deg for a in p.arrows):
        raise PresentationError("use build_dg_quiver_category for graded or differential data")
    return PathCategory(p, field, length_cap)


def build_dg_quiver_category(p: QuiverPresentation, field: Field = QQ, length_cap: int = 32) -> PathCategory:
    """dg category of a dg quiver; d is extended by the graded Leibniz rule."""
    return PathCategory(p, field, length_cap)


class KunnethProduct(DgCategory):
    """Tensor product of two categories concentrated in degree 0.

    Objects are labelled ``"<a>x<b>"``; basis morphisms are pairs of basis keys.
    """

    def __init__(self, A: DgCategory, B: DgCategory, objects: Sequence | None = None):
        if A.field is not B.field and A.field != B.field:
            raise ValueError("factors live over different fields")
        super().__init__(A.field)
        for C in (A, B):
            for X in C.test_objects():
                for Y in C.test_objects():
                    if any(d != 0 for d in C.hom_basis(X, Y).degrees()):
                        raise ValueError(f"{C.name} is not concentrated in degree 0")
        self.A, self.B = A, B
        self.name = f"{A.name}x{B.name}"
        pairs = objects or [(a, b) for a in A.test_objects() for b in B.test_objects()]
        self._pair = {}
        for a, b in pairs:
            self._pair[self.label(a, b)] = (a, b)

    @staticmethod
    def label(a, b) -> str:
        return f"{a}x{b}"

    def factors(self, X) -> tuple:
        try:
            return self._pair[X]
        except KeyError:
            raise KeyError(f"unknown object {X!r} in {self.name}") from None

    def _hom_basis(self, X, Y):
        (a1, b1), (a2, b2) = self.factors(X), self.factors(Y)
        ka, kb = self.A.hom_basis(a1, a2)[0], self.B.hom_basis(b1, b2)[0]
        return GradedBasis({0: [(p, q) for p in ka for q in kb]})

    def identity(self, X):
        a, b = self.factors(X)
        (ka,) = self.A.identity(a).coeffs
        (kb,) = self.B.identity(b).coeffs
        return Morphism(X, X, 0, {(ka, kb): self.field.one})

    def _d(self, m):
        return self.zero(m.source, m.target, m.degree + 1)

    def _compose(self, a, b):
        (a1, b1), (a2, b2), (a3, b3) = self.factors(b.source), self.factors(b.target), self.factors(a.target)
        out: dict = {}
        for (p, q), c in a.coeffs.items():
            for (r, s), e in b.coeffs.items():
                left = self.A.compose(Morphism(a2, a3, 0, {p: 1}), Morphism(a1, a2, 0, {r: 1}))
                right = self.B.compose(Morphism(b2, b3, 0, {q: 1}), Morphism(b1, b2, 0, {s: 1}))
                for k1, v1 in left.coeffs.items():
                    for k2, v2 in right.coeffs.items():
                        out[(k1, k2)] = out.get((k1, k2), 0) + c * e * v1 * v2
        return Morphism(b.source, a.target, a.degree + b.degree, {k: v for k, v in out.items() if v != 0})

    def tensor(self, alpha: Morphism, beta: Morphism) -> Morphism:
        """``alpha ⊠ beta`` for factor morphisms."""
        X, Y = self.label(alpha.source, beta.source), self.label(alpha.target, beta.target)
        coeffs = {(p, q): c * e for p, c in alpha.coeffs.items() for q, e in beta.coeffs.items()}
        return Morphism(X, Y, 0, coeffs)

    def test_objects(self):
        return list(self._pair)

    def path(self, text: str, source, target) -> Morphism:
        """Parse ``"x0#id - 2*x1#y0"``: each term is ``left#right`` with factor paths."""
        text = text.strip()
        coeffs: dict = {}
        if text != "0":
            pos = 0
            while pos < len(text):
                m = _TERM.match(text, pos)
                if not m or m.end() == pos:
                    raise PresentationError(f"cannot parse {text!r} at column {pos + 1}")
                halves = m.group(2).split("#")
                if len(halves) != 2:
                    raise PresentationError(f"term {m.group(2).strip()!r} needs exactly one '#'")
                (pa, ca), = _single_term(halves[0], self.field)
                (pb, cb), = _single_term(halves[1], self.field)
                c = ca * cb * (-1 if m.group(1) == "-" else 1)
                coeffs[(pa, pb)] = coeffs.get((pa, pb), 0) + c
                pos = m.end()
        return self.morphism(source, target, 0, {k: v for k, v in coeffs.items() if v != 0})

    def format_key(self, key) -> str:
        fa = getattr(self.A, "format_key", str)
        fb = getattr(self.B, "format_key", str)
        return f"{fa(key[0])}#{fb(key[1])}"


def _single_term(text: str, field: Field) -> list:
    combo = parse_combination(text, field)
    if len(combo) != 1:
        raise PresentationError(f"{text.strip()!r} must be a single path")
    return list(combo.items())


def kunneth_product(A: DgCategory, B: DgCategory) -> KunnethProduct:
    return KunnethProduct(A, B)
