"""Line-bundle categories on projective spaces and their products.

``O(-k-1) -> O(-k)`` carries arrows ``<letter_k><i>`` for ``i = 0..n`` (``x`` for
the last step, then ``y``, ``z``, ...), modulo commutation relations, so hom
spaces are spaces of monomials.  Complexes are one-sided twisted complexes in
the pretriangulated hull.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .completions import Pretr, Twisted
from .core_algebra import QQ, Field, nullspace, parity_sign
from .dg_kernel import AdditiveFunctorTable, Morphism, extend_to_complexes
from .homology_lab import hom_complex, quiver_functor_lift
from .lift_engine import f_sharp
from .presentations import Arrow, KunnethProduct, PathCategory, QuiverPresentation

LETTERS = "xyzwuvst"


class WindowError(ValueError):
    """A line bundle falls outside the window of the category at hand."""


def line_bundle(i: int) -> str:
    return "O" if i == 0 else f"O({i})"


def twist_of(label: str) -> int:
    if label == "O":
        return 0
    if label.startswith("O(") and label.endswith(")"):
        return int(label[2:-1])
    raise ValueError(f"{label!r} is not a line bundle label")


def arrow_letter(step: int) -> str:
    return LETTERS[step] if step < len(LETTERS) else f"a{step}_"


def beilinson_presentation(n: int, window: int | None = None) -> QuiverPresentation:
    """Quiver with relations for ``O(-window), ..., O`` on ``P^n``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    m = n if window is None else window
    vertices = [line_bundle(-k) for k in range(m, -1, -1)]
    arrows = []
    for step in range(m):
        src, dst = line_bundle(-step - 1), line_bundle(-step)
        arrows += [Arrow(f"{arrow_letter(step)}{i}", src, dst) for i in range(n + 1)]
    relations = []
    for step in range(m - 1):
        left, right = arrow_letter(step), arrow_letter(step + 1)
        for i, j in itertools.combinations(range(n + 1), 2):
            relations.append({(f"{left}{i}", f"{right}{j}"): 1, (f"{left}{j}", f"{right}{i}"): -1})
    name = f"B{n}" if m == n else f"B{n}[-{m},0]"
    return QuiverPresentation(vertices, arrows, relations, name=name)


class BeilinsonCategory(PathCategory):
    """Line bundles ``O(-window), ..., O`` on ``P^n`` with hom spaces of monomials."""

    def __init__(self, n: int, window: int | None = None, field: Field = QQ):
        super().__init__(beilinson_presentation(n, window), field)
        self.n = n
        self.window = n if window is None else window
        self._var = {}
        for step in range(self.window):
            for i in range(n + 1):
                self._var[f"{arrow_letter(step)}{i}"] = i

    def in_window(self, i: int) -> bool:
        return -self.window <= i <= 0

    def monomial(self, key: tuple) -> tuple:
        """Exponent vector of a path."""
        exps = [0] * (self.n + 1)
        for a in key:
            exps[self._var[a]] += 1
        return tuple(exps)

    def from_monomial(self, src: int, dst: int, exps: Sequence[int]) -> Morphism:
        """The basis morphism ``O(src) -> O(dst)`` with the given exponents."""
        if sum(exps) != dst - src:
            raise ValueError("monomial degree does not match the twists")
        if not (self.in_window(src) and self.in_window(dst)):
            raise WindowError(f"O({src}) or O({dst}) outside the window [-{self.window}, 0]")
        variables = [i for i, e in enumerate(exps) for _ in range(e)]
        path = []
        level = src
        for v in variables:
            path.append(f"{arrow_letter(-level - 1)}{v}")
            level += 1
        key = tuple(reversed(path))
        return self.from_paths({key: self.field.one}, line_bundle(src), line_bundle(dst))


def beilinson_category(n: int, window: int | None = None, field: Field = QQ) -> BeilinsonCategory:
    return BeilinsonCategory(n, window, field)


def sym_dimension(variables: int, degree: int) -> int:
    """Number of monomials of a given degree, by direct enumeration."""
    if degree < 0:
        return 0
    return sum(1 for e in itertools.product(range(degree + 1), repeat=variables) if sum(e) == degree)


class ProductBeilinson(KunnethProduct):
    """Künneth product of two line-bundle windows, ``O(i)xO(j)``."""

    def __init__(self, A: BeilinsonCategory, B: BeilinsonCategory):
        super().__init__(A, B)
        self.name = f"B({A.n},{B.n})[{A.window},{B.window}]"
        self.hat = False

    def twists(self, X: str) -> tuple:
        a, b = self.factors(X)
        return twist_of(a), twist_of(b)

    def bundle(self, i: int, j: int) -> str:
        if not (self.A.in_window(i) and self.B.in_window(j)):
            raise WindowError(f"O({i})xO({j}) outside the window")
        return self.label(line_bundle(i), line_bundle(j))

    def monomials(self, key) -> tuple:
        return self.A.monomial(key[0]), self.B.monomial(key[1])

    def from_monomials(self, src: tuple, dst: tuple, exps_a, exps_b) -> Morphism:
        ma = self.A.from_monomial(src[0], dst[0], exps_a)
        mb = self.B.from_monomial(src[1], dst[1], exps_b)
        return self.tensor(ma, mb)


def product_category(a: int, b: int, hat: bool = False, field: Field = QQ) -> ProductBeilinson:
    """``B^{a,b}``, or the doubled window ``B̂^{a,b}`` when ``hat`` is set."""
    scale = 2 if hat else 1
    prod = ProductBeilinson(BeilinsonCategory(a, scale * a, field), BeilinsonCategory(b, scale * b, field))
    prod.hat = hat
    return prod


# ---------------------------------------------------------------------------


def koszul_complex(n: int = 2, hull: Pretr | None = None) -> Twisted:
    """The truncated Koszul complex ``O(-n)^{n+1} -> ... -> O`` resolving ``O(-n-1)``.

    For ``n = 2`` the differentials are ``ρ = [[-y1, y2, 0], [y0, 0, -y2], [0, -y0, y1]]``
    and ``δ = [x0, x1, x2]``.  Other ``n`` use the exterior-algebra differential.
    """
    hull = hull or Pretr(BeilinsonCategory(n))
    B = hull.ground
    if n == 2:
        summands = [("O(-2)", 0)] * 3 + [("O(-1)", -1)] * 3 + [("O", -2)]
        rho = [["-y1", "y2", None], ["y0", None, "-y2"], [None, "-y0", "y1"]]
        entries = {}
        for r, row in enumerate(rho):
            for c, expr in enumerate(row):
                if expr:
                    entries[(3 + r, c)] = B.path(expr)
        for c in range(3):
            entries[(6, 3 + c)] = B.path(f"x{c}")
        return hull.complex(summands, entries)

    # general n: term k (bundle O(-k), cohomological degree n-k) indexed by k-subsets
    blocks = []
    summands = []
    for k in range(n, -1, -1):
        subsets = list(itertools.combinations(range(n + 1), k))
        blocks.append((k, len(summands), subsets))
        summands += [(line_bundle(-k), k - n)] * len(subsets)
    entries = {}
    for (k, off, subsets), (_, off_next, smaller) in zip(blocks, blocks[1:]):
        position = {S: idx for idx, S in enumerate(smaller)}
        letter = arrow_letter(k - 1)
        for col, S in enumerate(subsets):
            for pos, s in enumerate(S):
                rest = S[:pos] + S[pos + 1:]
                entries[(off_next + position[rest], off + col)] = parity_sign(pos) * B.path(f"{letter}{s}")
    return hull.complex(summands, entries)


# ---------------------------------------------------------------------------
# pullback, direct image


def pullback_functor(a: int, b: int, along: str = "first", field: Field = QQ, target_hull: Pretr | None = None):
    """Pullback along a projection of ``P^a x P^b``, as a table and its extension.

    Returns ``(table, extension, source_hull)``.
    """
    tgt_hull = target_hull or Pretr(product_category(a, b, field=field))
    prod = tgt_hull.ground
    factor = prod.A if along == "first" else prod.B
    src_hull = Pretr(factor)

    def image(X):
        return prod.label(X, "O") if along == "first" else prod.label("O", X)

    objects = {X: tgt_hull.embed_object(image(X)) for X in factor.test_objects()}

    def on_basis(X, Y, key):
        pair = (key, ()) if along == "first" else ((), key)
        return tgt_hull.embed(Morphism(image(X), image(Y), 0, {pair: field.one}))

    table = AdditiveFunctorTable(factor, tgt_hull, objects, on_basis)
    return table, extend_to_complexes(table, src_hull), src_hull


def direct_image_functor(a: int, b: int, along: str = "first", field: Field = QQ, source_hull: Pretr | None = None):
    """Direct image along a projection: delete summands whose other twist is negative.

    Along the first projection ``O(i)xO(j) -> O(i)`` if ``j = 0`` and ``0`` if
    ``j < 0``; along the second the roles swap.  Returns
    ``(table, extension, target_hull)``.
    """
    src_hull = source_hull or Pretr(product_category(a, b, field=field))
    prod = src_hull.ground
    keep = prod.A if along == "first" else prod.B
    tgt_hull = Pretr(keep)
    zero = tgt_hull.zero_object

    def split(X):
        pa, pb = prod.factors(X)
        return (pa, pb) if along == "first" else (pb, pa)

    objects = {}
    for X in prod.test_objects():
        kept, other = split(X)
        objects[X] = tgt_hull.embed_object(kept) if twist_of(other) == 0 else zero

    def on_basis(X, Y, key):
        FX, FY = objects[X], objects[Y]
        if FX == zero or FY == zero:
            return tgt_hull.zero(FX, FY, 0)
        kept_key = key[0] if along == "first" else key[1]
        return tgt_hull.embed(Morphism(split(X)[0], split(Y)[0], 0, {kept_key: field.one}))

    table = AdditiveFunctorTable(prod, tgt_hull, objects, on_basis)
    return table, extend_to_complexes(table, src_hull), tgt_hull


def random_line_bundle_complex(hull: Pretr, rng, max_terms: int = 3, max_width: int = 2, spread: int = 2) -> Twisted:
    """Random bounded complex of generators with degree-0 differentials.

    Term ``k`` sits in cohomological degree ``k``; each differential is a random
    point of the solution space of ``d_k ∘ d_{k-1} = 0``, with small integer
    coordinates.
    """
    C = hull.ground
    field = C.field
    gens = list(C.test_objects())
    nterms = rng.randint(1, max_terms)
    terms = [[rng.choice(gens) for _ in range(rng.randint(1, max_width))] for _ in range(nterms)]
    offsets = list(itertools.accumulate([0] + [len(t) for t in terms]))
    summands = [(X, -k) for k, term in enumerate(terms) for X in term]
    entries: dict = {}
    previous: dict = {}
    for k in range(nterms - 1):
        params = []
        for a, X in enumerate(terms[k]):
            for b, Y in enumerate(terms[k + 1]):
                for m in C.basis_morphisms(X, Y, 0):
                    params.append((a, b, m))
        columns = []
        for a, b, m in params:
            col = {}
            for (b0, a0), d in previous.items():
                if b0 != a:
                    continue
                for key, c in C.compose(m, d).coeffs.items():
                    col[(a0, b, key)] = col.get((a0, b, key), 0) + c
            columns.append({key: v for key, v in col.items() if v != 0})
        # re-index rows for the solver
        rows = {}
        indexed = [{rows.setdefault(r, len(rows)): v for r, v in col.items()} for col in columns]
        kernel = nullspace(indexed, field.one) if params else []
        current: dict = {}
        for vec in kernel:
            scale = field(rng.randint(-spread, spread))
            if not scale:
                continue
            for idx, v in vec.items():
                a, b, m = params[idx]
                term = scale * v * m
                current[(b, a)] = current[(b, a)] + term if (b, a) in current else term
        current = {pos: m for pos, m in current.items() if not m.is_zero()}
        for (b, a), m in current.items():
            entries[(offsets[k + 1] + b, offsets[k] + a)] = m
        previous = current
    return hull.complex(summands, entries)


# ---------------------------------------------------------------------------
# tensor products of complexes on the product


def tensor_with_kernel(K: Twisted, X: Twisted, source_hull: Pretr, target_hull: Pretr) -> Twisted:
    """Total complex of ``X ⊗ K`` on the doubled window.

    Summand ``(a, b)`` is ``X_a ⊗ K_b`` with shift ``t_a + u_b``; the twist is
    ``p ⊗ 1 + (-1)^{t_a} 1 ⊗ r``.
    """
    src: ProductBeilinson = source_hull.ground
    tgt: ProductBeilinson = target_hull.ground
    xs, ks = source_hull.summands(X), source_hull.summands(K)
    pairs = [(a, b) for a in range(len(xs)) for b in range(len(ks))]
    index = {pr: n for n, pr in enumerate(pairs)}

    def twists(label):
        return src.twists(label)

    summands = []
    for a, b in pairs:
        (i1, j1), (i2, j2) = twists(xs[a][0]), twists(ks[b][0])
        summands.append((tgt.bundle(i1 + i2, j1 + j2), xs[a][1] + ks[b][1]))

    def moved(entry: Morphism, fixed: str, on_left: bool) -> Morphism:
        """``entry ⊗ id_fixed`` re-expressed on the doubled window."""
        fi, fj = twists(fixed)
        (si, sj), (ti, tj) = twists(entry.source), twists(entry.target)
        out = None
        for key, c in entry.coeffs.items():
            ma, mb = src.monomials(key)
            m = tgt.from_monomials((si + fi, sj + fj), (ti + fi, tj + fj), ma, mb)
            out = c * m if out is None else out + c * m
        return out

    entries = {}
    for (j, i), alpha in source_hull.entries(X.q).items():
        for b in range(len(ks)):
            entries[(index[(j, b)], index[(i, b)])] = moved(alpha, ks[b][0], True)
    for (j, i), beta in source_hull.entries(K.q).items():
        for a in range(len(xs)):
            sign = parity_sign(xs[a][1])
            entries[(index[(a, j)], index[(a, i)])] = sign * moved(beta, xs[a][0], False)
    return target_hull.complex(summands, entries)


def check_window(hull: Pretr, X: Twisted) -> None:
    prod = hull.ground
    for label, _shift in hull.summands(X):
        try:
            i, j = prod.twists(label)
        except KeyError:
            raise WindowError(f"{label} is not an object of {prod.name}") from None
        if not (prod.A.in_window(i) and prod.B.in_window(j)):
            raise WindowError(f"{label} outside the window")


class FourierMukaiPipeline:
    """``Ḡ ∘ H⁰(P♯) ∘ (- ⊗ K) ∘ F̄`` on explicit complexes over ``B^a``.

    ``P`` is a user-supplied A∞-functor from the doubled window into
    ``pretr(B^{a,b})``; only finitely checkable consequences of its defining
    property are validated.
    """

    def __init__(self, a: int, b: int, K: Twisted, P, field: Field = QQ):
        if not isinstance(P.target, Pretr):
            raise ValueError("P must land in a pretriangulated hull")
        self.a, self.b = a, b
        self.mid_hull: Pretr = P.target
        mid = self.mid_hull.ground
        if not isinstance(mid, ProductBeilinson) or (mid.A.n, mid.B.n) != (a, b):
            raise ValueError(f"P must land in pretr(B^({a},{b}))")
        self.hat_hull = Pretr(P.source)
        self.K = K
        check_window(self.mid_hull, K)
        self.P = P
        self.P_sharp = f_sharp(P, self.hat_hull)
        _, self.pull_ext, self.source_hull = pullback_functor(a, b, "first", field, self.mid_hull)
        _, self.push_ext, self.target_hull = direct_image_functor(a, b, "second", field, self.mid_hull)

    def validate(self) -> dict:
        """Check ``P`` on generators against the line-bundle hom dimensions."""
        hat = self.P.source
        mid = self.mid_hull
        report = {"fully_faithful_on_generators": True, "generators_fixed": True, "mismatches": []}
        gens = hat.test_objects()
        for X in gens:
            for Y in gens:
                expected = len(hat.hom_basis(X, Y)[0])
                K = hom_complex(mid, self.P.obj(X), self.P.obj(Y))
                got = {n: K.cohomology_dim(n) for n in K.basis.degrees()}
                if got.get(0, 0) != expected:
                    report["fully_faithful_on_generators"] = False
                    report["mismatches"].append((X, Y, expected, got.get(0, 0)))
        small = mid.ground
        for X in gens:
            i, j = hat.twists(X)
            if not (small.A.in_window(i) and small.B.in_window(j)):
                continue
            for E in small.test_objects():
                want = len(small.hom_basis(small.bundle(i, j), E)[0])
                K = hom_complex(mid, self.P.obj(X), mid.embed_object(E))
                dims = {n: K.cohomology_dim(n) for n in K.basis.degrees()}
                if dims.get(0, 0) != want or any(v for n, v in dims.items() if n != 0):
                    report["generators_fixed"] = False
                    report["mismatches"].append((X, E, want, dims))
        report["ok"] = report["fully_faithful_on_generators"] and report["generators_fixed"]
        return report

    def apply(self, X: Twisted) -> Twisted:
        pulled = self.pull_ext.obj(X)
        tensored = tensor_with_kernel(self.K, pulled, self.mid_hull, self.hat_hull)
        transformed = self.P_sharp.obj(tensored)
        return self.push_ext.obj(transformed)


def fm_pipeline(a: int, b: int, K: Twisted, P, field: Field = QQ) -> FourierMukaiPipeline:
    return FourierMukaiPipeline(a, b, K, P, field)


# ---------------------------------------------------------------------------
# twisting by O(-1) on P^2


def koszul_projection(hull: Pretr, C: Twisted, j: int) -> Morphism:
    """Closed map ``C -> O(-2)`` picking the ``O(-2)`` summand paired with ``y_j``.

    The kernel of ``ρ`` is spanned by ``(y2, y1, y0)``, so the projection onto
    summand ``2 - j`` represents multiplication by the ``j``-th variable.
    """
    target = hull.embed_object("O(-2)")
    B = hull.ground
    return hull.from_entries(C, target, 0, {(0, 2 - j): B.identity("O(-2)")})


def twist_by_O_minus1_model(field: Field = QQ):
    """A∞-functor ``B² -> pretr(B²)`` modelling ``O(-1) ⊗ -``.

    Returns the quiver lift (functor, homotopies, certificate).
    """
    B = BeilinsonCategory(2, field=field)
    hull = Pretr(B)
    C = koszul_complex(2, hull)
    objects = {"O": hull.embed_object("O(-1)"), "O(-1)": hull.embed_object("O(-2)"), "O(-2)": C}
    arrows = {f"x{i}": hull.embed(B.path(f"y{i}")) for i in range(3)}
    arrows.update({f"y{j}": koszul_projection(hull, C, j) for j in range(3)})
    return quiver_functor_lift(B, hull, objects, arrows, name="O(-1) twist model")


# ---------------------------------------------------------------------------
# resolving the doubled window on P^1 x pt


def resolution_functor_p1(field: Field = QQ):
    """A∞-functor ``B̂^{1,0} -> pretr(B^{1,0})`` sending ``O(-2)`` to ``[O(-1)^2 -> O]``.

    Arrows ``O(-1) -> O`` go to themselves and ``y_j`` goes to the projection
    realising multiplication by the ``j``-th variable through the resolution.
    """
    hat = product_category(1, 0, hat=True, field=field)
    hull = Pretr(product_category(1, 0, field=field))
    small = hull.ground
    top, mid = small.bundle(0, 0), small.bundle(-1, 0)
    resolution = hull.complex(
        [(mid, 0), (mid, 0), (top, -1)],
        {(2, 0): small.from_monomials((-1, 0), (0, 0), (1, 0), (0,)),
         (2, 1): small.from_monomials((-1, 0), (0, 0), (0, 1), (0,))},
    )
    objects = {hat.bundle(0, 0): hull.embed_object(top), hat.bundle(-1, 0): hull.embed_object(mid),
               hat.bundle(-2, 0): resolution}
    ident = small.identity(mid)
    # O(-2) -> O(-1)^2 is (x1, -x0), so y0 reads -summand 1 and y1 reads summand 0
    images = {
        ("x0",): hull.embed(small.from_monomials((-1, 0), (0, 0), (1, 0), (0,))),
        ("x1",): hull.embed(small.from_monomials((-1, 0), (0, 0), (0, 1), (0,))),
        ("y0",): -hull.from_entries(resolution, objects[hat.bundle(-1, 0)], 0, {(0, 1): ident}),
        ("y1",): hull.from_entries(resolution, objects[hat.bundle(-1, 0)], 0, {(0, 0): ident}),
    }
    representatives = {}
    for X in hat.test_objects():
        for Y in hat.test_objects():
            if X == Y:
                continue
            for key in hat.hom_basis(X, Y)[0]:
                path = key[0]
                m = images[path[:1]]
                for a in path[1:]:
                    m = hull.compose(m, images[(a,)])
                representatives[key] = m
    return quiver_functor_lift(hat, hull, objects, {}, representatives=representatives,
                               name="P1 resolution")
