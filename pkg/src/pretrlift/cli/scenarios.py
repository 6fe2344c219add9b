"""Worked computations bundled as named scenarios.

Each scenario returns a list of :class:`Check` rows (tag, verdict, detail) plus
structured data, so the CLI and the test suite share one implementation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any

from ..beilinson_geometry import (
    BeilinsonCategory,
    direct_image_functor,
    koszul_complex,
    line_bundle,
    pullback_functor,
    random_line_bundle_complex,
    sym_dimension,
    twist_by_O_minus1_model,
)
from ..completions import Pretr, check_maurer_cartan
from ..core_algebra import QQ, Field, rank
from ..homology_lab import decide_h0_isomorphic, hom_complex, quiver_functor_lift
from ..lift_engine import f_sharp
from ..presentations import (
    Arrow,
    QuiverPresentation,
    build_dg_quiver_category,
    build_path_category,
    parse_combination,
)


@dataclass
class Check:
    tag: str
    ok: bool
    detail: str

    def to_dict(self) -> dict:
        return {"tag": self.tag, "ok": self.ok, "detail": self.detail}


@dataclass
class ScenarioResult:
    name: str
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, tag: str, ok: bool, detail: str) -> None:
        self.checks.append(Check(tag, bool(ok), detail))

    def to_dict(self) -> dict:
        return {"scenario": self.name, "ok": self.ok, "checks": [c.to_dict() for c in self.checks], "data": self.data}


# ---------------------------------------------------------------------------
# two lifts of one H⁰ functor


def two_lift_presentations(field: Field = QQ):
    """``Q``: ``A -β-> B -γ-> C`` with ``γβ = 0``; ``B``: adds ``ω, τ`` in degree -1 with ``dω = dτ = γβ``."""
    arrows = [Arrow("beta", "A", "B"), Arrow("gamma", "B", "C")]
    quiver = QuiverPresentation(
        ["A", "B", "C"], arrows, [parse_combination("gamma*beta", field)], name="Q"
    )
    bounded = QuiverPresentation(
        ["A", "B", "C"],
        arrows + [Arrow("omega", "A", "C", -1), Arrow("tau", "A", "C", -1)],
        [],
        {"omega": parse_combination("gamma*beta", field), "tau": parse_combination("gamma*beta", field)},
        name="B",
    )
    return quiver, bounded


@dataclass
class TwoLiftExample:
    Q: Any
    B: Any
    hull: Pretr
    source_hull: Pretr
    lifts: dict
    complex: Any


def two_lift_example(field: Field = QQ) -> TwoLiftExample:
    qp, bp = two_lift_presentations(field)
    Q, B = build_path_category(qp, field), build_dg_quiver_category(bp, field)
    hull = Pretr(B)
    objects = {v: hull.embed_object(v) for v in "ABC"}
    arrows = {"beta": hull.embed(B.path("beta")), "gamma": hull.embed(B.path("gamma"))}
    lifts = {}
    for label, pin in (("F", "omega"), ("G", "tau")):
        lifts[label] = quiver_functor_lift(
            Q, hull, objects, arrows, pins={(("gamma",), ("beta",)): hull.embed(B.path(pin))}, name=label
        )
    source_hull = Pretr(Q)
    cx = source_hull.complex([("A", 0), ("B", -1), ("C", -2)], {(1, 0): Q.path("beta"), (2, 1): Q.path("gamma")})
    return TwoLiftExample(Q, B, hull, source_hull, lifts, cx)


def scenario_two_lifts(field: Field = QQ) -> ScenarioResult:
    res = ScenarioResult("two-lifts")
    ex = two_lift_example(field)
    hull = ex.hull
    images = {}
    for label, lift in ex.lifts.items():
        res.add(f"relation[{label}]", lift.certificate.ok, f"checked chains {lift.certificate.to_dict()['checked']}")
        X = f_sharp(lift.functor, ex.source_hull).obj(ex.complex)
        images[label] = X
        ok_mc, _ = check_maurer_cartan(hull.sums, X.q)
        res.add(f"one-sided+MC[{label}]", hull.is_one_sided(X) and ok_mc, _entries_text(hull, X.q))
        res.data[f"{label}_sharp"] = {"summands": hull.summands(X), "q": _entries_text(hull, X.q)}
        res.data[f"{label}_notes"] = list(lift.notes)
    expected = {"F": "omega", "G": "tau"}
    for label, X in images.items():
        ents = hull.entries(X.q)
        words = {pos: set(k for k in m.coeffs) for pos, m in ents.items()}
        shape = words == {(1, 0): {("beta",)}, (2, 1): {("gamma",)}, (2, 0): {(expected[label],)}}
        res.add(f"twist shape[{label}]", shape, "entries beta, gamma and the pinned homotopy, up to sign")
    Kfg = hom_complex(hull, images["F"], images["G"])
    z0 = len(Kfg.cocycles(0))
    res.add("closed degree-0 maps F♯C -> G♯C", z0 == 0, f"dim Z⁰ = {z0}")
    verdict = decide_h0_isomorphic(hull, images["F"], images["G"])
    res.add("not H⁰-isomorphic: certified", verdict.status == "not isomorphic", verdict.certificate)
    for label, X in images.items():
        v = decide_h0_isomorphic(hull, X, hull.zero_object)
        res.add(f"{label}♯C not isomorphic to zero", v.status == "not isomorphic", v.certificate)
    return res


def _entries_text(hull: Pretr, m) -> dict:
    B = hull.ground
    return {f"{j},{i}": B.format_morphism(e) for (j, i), e in sorted(hull.entries(m).items())}


# ---------------------------------------------------------------------------
# no naive degree-0 twist functor on P^2


def scenario_beilinson_nogo(field: Field = QQ) -> ScenarioResult:
    res = ScenarioResult("beilinson-nogo")
    B = BeilinsonCategory(2, field=field)
    hull = Pretr(B)
    C = koszul_complex(2, hull)
    O2, O1 = hull.embed_object("O(-2)"), hull.embed_object("O(-1)")
    to_O2 = hom_complex(hull, C, O2)
    cocycles = to_O2.cocycles(0)
    res.add("dim Z⁰ Hom(C, O(-2)) = 3", len(cocycles) == 3, f"dim = {len(cocycles)}")
    h0 = to_O2.cohomology_dim(0)
    res.add("H⁰ Hom(C, O(-2)) = k^3", h0 == 3, f"dim = {h0}")
    z = cocycles
    to_O1 = hom_complex(hull, C, O1)
    composites = {}
    for i in range(3):
        y = hull.embed(B.path(f"y{i}"))
        for j, zj in enumerate(z):
            composites[(i, j)] = to_O1.coords(hull.compose(y, zj))
    r = rank(list(composites.values()))
    res.add("rank of the nine composites y_i∘z_j", r == 9, f"rank = {r}")
    # f(x1∘y0) lives in span{y1∘z_k}, f(x0∘y1) in span{y0∘z_k}; these meet only in 0
    left = [composites[(1, k)] for k in range(3)]
    right = [composites[(0, k)] for k in range(3)]
    meet = len(left) + len(right) - rank(left + right)
    injective = rank(left) == 3 and rank(right) == 3
    res.add(
        "rank 9: no naive tensor functor exists",
        meet == 0 and injective,
        "f(x1∘y0) and f(x0∘y1) lie in independent spans and vanish only if f(y0) = f(y1) = 0",
    )
    res.data["composite_rank"] = r
    return res


# ---------------------------------------------------------------------------
# the O(-1) twist as an A∞-functor


def scenario_twist_p2(field: Field = QQ) -> ScenarioResult:
    res = ScenarioResult("twist-p2")
    lift = twist_by_O_minus1_model(field)
    res.add("quiver lift relation check", lift.certificate.ok, f"checked chains {lift.certificate.to_dict()['checked']}")
    F, hull = lift.functor, lift.functor.target
    B = hull.ground
    ok = True
    for i in range(3):
        image = F.f1(B.path(f"x{i}"))
        expected = hull.embed(B.path(f"y{i}"))
        ok = ok and (image == expected)
    res.add("H⁰(F)(x_i) = [y_i]", ok, "on the nose at the chain level")
    C = koszul_complex(2, hull)
    X = f_sharp(F, hull).obj(C)
    res.add("F♯(Koszul C) is one-sided", hull.is_one_sided(X), f"{len(hull.summands(X))} summands")
    dims = []
    for j in range(3):
        K = hom_complex(hull, X, hull.embed_object(line_bundle(-j)))
        dims.append(K.cohomology_dim(0))
    oracle = [sym_dimension(3, 4 - j) for j in range(3)]
    res.add("H⁰ Hom(F♯C, O(-j)) = 15, 10, 6", dims == oracle == [15, 10, 6], f"dims = {dims}")
    res.data["h0_dims"] = dims
    res.data["homotopies"] = len(lift.homotopies)
    return res


# ---------------------------------------------------------------------------
# pullback and direct image are adjoint on H⁰


def adjunction_trials(a: int, b: int, count: int, seed: int, field: Field = QQ) -> list:
    """``(dim H⁰Hom(F̄X, Y), dim H⁰Hom(X, ḠY))`` for random complexes."""
    pull, pull_ext, src_hull = pullback_functor(a, b, "first", field)
    mid_hull = pull.hull
    _, push_ext, _ = direct_image_functor(a, b, "first", field, mid_hull)
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        X = random_line_bundle_complex(src_hull, rng)
        Y = random_line_bundle_complex(mid_hull, rng)
        left = hom_complex(mid_hull, pull_ext.obj(X), Y).cohomology_dim(0)
        right = hom_complex(src_hull, X, push_ext.obj(Y)).cohomology_dim(0)
        out.append((left, right))
    return out


def scenario_adjunction_p1(field: Field = QQ, count: int = 25, seed: int = 7) -> ScenarioResult:
    res = ScenarioResult("adjunction-p1")
    for a, b in ((1, 0), (1, 1)):
        trials = adjunction_trials(a, b, count, seed, field)
        bad = [t for t in trials if t[0] != t[1]]
        res.add(f"adjunction dims on B^({a},{b})", not bad, f"{len(trials)} trials, mismatches {bad[:3]}")
    return res


SCENARIOS = {
    "two-lifts": scenario_two_lifts,
    "beilinson-nogo": scenario_beilinson_nogo,
    "twist-p2": scenario_twist_p2,
    "adjunction-p1": scenario_adjunction_p1,
}
