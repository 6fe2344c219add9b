"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

The lines are printed in the terminal summary (see ``conftest.py``).  Time
limits are asserted alongside the mathematical checks.
"""

import os
import random
import subprocess
import sys
import time
from pathlib import Path

from pretrlift.ainf_engine import EmbeddedFunctor, IdentityFunctor, check_relation_suite, check_stasheff, random_chains
from pretrlift.beilinson_geometry import (
    BeilinsonCategory,
    koszul_complex,
    product_category,
    random_line_bundle_complex,
    sym_dimension,
)
from pretrlift.cli import formats
from pretrlift.cli.scenarios import (
    adjunction_trials,
    scenario_beilinson_nogo,
    scenario_twist_p2,
    scenario_two_lifts,
    two_lift_example,
)
from pretrlift.completions import (
    DirectSum,
    Pretr,
    Shift,
    SumCompletion,
    TranslationCompletion,
    TwistCompletion,
    check_maurer_cartan,
    cone_objects,
)
from pretrlift.dg_kernel import check_dg_axioms
from pretrlift.homology_lab import decide_h0_isomorphic, hom_complex
from pretrlift.lift_engine import f_sharp, object_mc_image

from conftest import record

ROOT = Path(__file__).resolve().parent.parent


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def seed_categories():
    ex = two_lift_example()
    return ex, {
        "B1": BeilinsonCategory(1),
        "B2": BeilinsonCategory(2),
        "B11": product_category(1, 1),
        "Bhat11": product_category(1, 1, hat=True),
        "Q": ex.Q,
        "B": ex.B,
    }


def with_completions(C):
    base_hull = Pretr(C)
    return [
        ("base", C),
        ("translations", TranslationCompletion(C)),
        ("sums", SumCompletion(C)),
        ("twists", TwistCompletion(C)),
        ("pretr", Pretr(C, cone_objects(base_hull, limit=2))),
    ]


def test_c1_dg_axioms():
    _, cats = seed_categories()
    failures, counted = [], 0
    with Timer() as t:
        for name, C in cats.items():
            for kind, D in with_completions(C):
                report = check_dg_axioms(D, depth=3)
                counted += sum(report.checked.values())
                if not report.ok:
                    failures.append(f"{name}/{kind}: {report.violations[0].describe()}")
    ok = not failures and t.elapsed < 30
    record(1, "dg axiom suite", ok, f"{counted} identities, {t.elapsed:.1f}s < 30s, failures {failures[:2]}")
    assert not failures
    assert t.elapsed < 30


def test_c2_stasheff():
    _, cats = seed_categories()
    failures, counted = [], 0
    with Timer() as t:
        for name, C in cats.items():
            for kind, D in with_completions(C):
                report = check_stasheff(D)
                counted += sum(report.checked.values())
                if not report.ok:
                    failures.append(f"{name}/{kind}")
    ok = not failures and t.elapsed < 10
    record(2, "A∞ Stasheff suite", ok, f"{counted} chains, {t.elapsed:.1f}s < 10s, failures {failures[:3]}")
    assert not failures
    assert t.elapsed < 10


def _stage_objects(FS, hull, extra, reduced):
    """Designated objects per lift stage; ``reduced`` trims the sum stage for the P² model."""
    base = hull.ground
    if reduced:
        sums = [DirectSum((Shift(A, s),)) for A in base.test_objects() for s in (0, -1)]
        sums.append(DirectSum((Shift("O(-1)", 0), Shift("O", -1))))
        twists = hull.test_objects() + [
            hull.complex([("O(-1)", 0), ("O", -1)], {(1, 0): base.path("x0")}),
            hull.complex([("O(-2)", 0), ("O(-1)", -1)], {(1, 0): base.path("y1")}),
        ]
        return [("translations", FS.translations, FS.translations.source.test_objects(), []),
                ("sums", FS.sums, sums, []),
                ("twists", FS.twists, twists, extra),
                ("sharp", FS, twists, extra)]
    objs = hull.test_objects() + extra
    return [("translations", FS.translations, FS.translations.source.test_objects(), []),
            ("sums", FS.sums, FS.sums.source.test_objects(), []),
            ("twists", FS.twists, objs, []),
            ("sharp", FS, objs, [])]


def test_c3_lift_residuals(two_lifts, twist_model):
    cases = [
        ("F", two_lifts.lifts["F"].functor, two_lifts.source_hull, [two_lifts.complex], False),
        ("G", two_lifts.lifts["G"].functor, two_lifts.source_hull, [two_lifts.complex], False),
    ]
    B2 = twist_model.functor.source
    hull2 = Pretr(B2)
    cases.append(("O(-1) twist", twist_model.functor, hull2, [koszul_complex(2, hull2)], True))
    failures, totals = [], {}
    with Timer() as t:
        for name, F, hull, extra, reduced in cases:
            FS = f_sharp(F, hull)
            for stage, G, objs, walk_extra in _stage_objects(FS, hull, extra, reduced):
                report = check_relation_suite(G, objs, max_length=3)
                walk = objs + walk_extra
                chains = random_chains(G.source, walk, 4, 200, random.Random(1))
                if walk_extra:
                    # the big object also enters shorter chains
                    chains += [c for n in (1, 2, 3) for c in random_chains(G.source, walk, n, 30, random.Random(n))]
                check_relation_suite(G, objs, chains=chains, report=report)
                if report.checked.get(4, 0) < 200:
                    failures.append(f"{name}/{stage}: only {report.checked.get(4, 0)} length-4 chains")
                if not report.ok:
                    failures.append(f"{name}/{stage}")
                for n, c in report.checked.items():
                    totals[n] = totals.get(n, 0) + c
    ok = not failures and t.elapsed < 60
    record(3, "lift correctness", ok, f"chains by length {dict(sorted(totals.items()))}, {t.elapsed:.1f}s < 60s")
    assert not failures, failures
    assert t.elapsed < 60


def test_c4_two_lifts():
    with Timer() as t:
        ex = two_lift_example()
        hull, B = ex.hull, ex.B
        images = {k: f_sharp(v.functor, ex.source_hull).obj(ex.complex) for k, v in ex.lifts.items()}
        shape_ok = True
        for label, homotopy in (("F", "omega"), ("G", "tau")):
            X = images[label]
            ents = hull.entries(X.q)
            expected = {(1, 0): B.path("beta"), (2, 1): B.path("gamma"), (2, 0): B.path(homotopy)}
            shape_ok &= hull.is_one_sided(X) and check_maurer_cartan(hull.sums, X.q)[0]
            shape_ok &= set(ents) == set(expected) and all(ents[p] in (e, -e) for p, e in expected.items())
        z0 = len(hom_complex(hull, images["F"], images["G"]).cocycles(0))
        verdicts = [decide_h0_isomorphic(hull, images["F"], images["G"]).status]
        verdicts += [decide_h0_isomorphic(hull, X, hull.zero_object).status for X in images.values()]
    ok = shape_ok and z0 == 0 and verdicts == ["not isomorphic"] * 3 and t.elapsed < 5
    record(4, "two non-isomorphic lifts", ok, f"Z⁰ dim {z0}, verdicts {verdicts}, {t.elapsed:.2f}s < 5s")
    assert shape_ok and z0 == 0
    assert verdicts == ["not isomorphic"] * 3
    assert t.elapsed < 5
    assert scenario_two_lifts().ok


def test_c5_no_naive_twist_functor():
    with Timer() as t:
        res = scenario_beilinson_nogo()
    ok = res.ok and res.data["composite_rank"] == 9 and t.elapsed < 5
    record(5, "no degree-0 twist functor on P²", ok,
           f"rank {res.data['composite_rank']}, checks {[c.tag for c in res.checks if not c.ok] or 'all pass'}, "
           f"{t.elapsed:.2f}s < 5s")
    assert res.ok
    assert t.elapsed < 5


def test_c6_twist_model():
    oracle = [sym_dimension(3, 4 - j) for j in range(3)]
    with Timer() as t:
        res = scenario_twist_p2()
    ok = res.ok and res.data["h0_dims"] == oracle == [15, 10, 6] and t.elapsed < 60
    record(6, "O(-1) twist model", ok, f"H⁰ dims {res.data['h0_dims']} vs oracle {oracle}, {t.elapsed:.2f}s < 60s")
    assert res.ok and res.data["h0_dims"] == oracle
    assert t.elapsed < 60


def test_c7_adjunction():
    with Timer() as t:
        trials = adjunction_trials(1, 1, 50, seed=12)
        extra = adjunction_trials(1, 0, 25, seed=11)
    bad = [p for p in trials + extra if p[0] != p[1]]
    nonzero = sum(1 for p in trials if p[0])
    ok = len(trials) == 50 and not bad and t.elapsed < 60
    record(7, "pullback/pushforward adjunction", ok,
           f"50 pairs on P¹xP¹ ({nonzero} with nonzero H⁰) plus {len(extra)} on P¹xpt, "
           f"mismatches {bad[:3]}, {t.elapsed:.1f}s < 60s")
    assert len(trials) == 50 and not bad
    assert t.elapsed < 60


def mc_image_cases(two_lifts, twist_model):
    """(lifted functor on sums, source hull) pairs for the Maurer-Cartan property."""
    cases = []
    for label in ("F", "G"):
        FS = f_sharp(two_lifts.lifts[label].functor, two_lifts.source_hull)
        cases.append((FS.sums, two_lifts.source_hull))
    B2 = twist_model.functor.source
    cases.append((f_sharp(twist_model.functor, Pretr(B2)).sums, Pretr(B2)))
    for C in (BeilinsonCategory(1), product_category(1, 1)):
        hull = Pretr(C)
        cases.append((f_sharp(EmbeddedFunctor(IdentityFunctor(C), hull), hull).sums, hull))
    return cases


def mc_image_run(two_lifts, twist_model, count=100, seed=2024):
    rng = random.Random(seed)
    cases = mc_image_cases(two_lifts, twist_model)
    rows, nontrivial = [], 0
    for k in range(count):
        f, hull = cases[k % len(cases)]
        X = random_line_bundle_complex(hull, rng)
        q = object_mc_image(f, X.q)
        ok, _ = check_maurer_cartan(f.target, q)
        nontrivial += not X.q.is_zero()
        rows.append({"ok": ok, "source": formats.complex_to_data(hull, X),
                     "image": {f"{j},{i}": f.target.ground.format_morphism(e)
                               for (j, i), e in sorted(f.target.entries(q).items())}})
    return rows, nontrivial


def test_c8_maurer_cartan_images(two_lifts, twist_model):
    with Timer() as t:
        rows, nontrivial = mc_image_run(two_lifts, twist_model)
    passed = sum(r["ok"] for r in rows)
    ok = passed == 100 and t.elapsed < 30
    record(8, "Maurer-Cartan images", ok, f"{passed}/100 pass ({nontrivial} nonzero twists), {t.elapsed:.1f}s < 30s")
    assert passed == 100
    assert t.elapsed < 30


def machine_report(two_lifts, twist_model) -> str:
    report = {
        "scenarios": {r.name: r.to_dict() for r in (scenario_two_lifts(), scenario_beilinson_nogo(), scenario_twist_p2())},
        "certificates": {k: v.certificate.to_dict() for k, v in two_lifts.lifts.items()},
        "twist_model": twist_model.certificate.to_dict(),
        "adjunction": adjunction_trials(1, 1, 10, seed=5),
        "maurer_cartan": mc_image_run(two_lifts, twist_model, count=20, seed=9)[0],
    }
    return formats.dumps(report)


def _cli_report(name: str, hash_seed: str) -> bytes:
    env = dict(os.environ, PYTHONHASHSEED=hash_seed)
    cmd = [sys.executable, "-m", "pretrlift", "scenario", name, "--format", "json"]
    return subprocess.run(cmd, capture_output=True, check=True, env=env, cwd=ROOT).stdout


def test_c9_determinism(two_lifts, twist_model):
    first = machine_report(two_lifts, twist_model)
    second = machine_report(two_lift_example(), twist_model)
    in_process = first == second
    cli_runs = {name: _cli_report(name, "1") == _cli_report(name, "2") for name in ("two-lifts", "adjunction-p1")}
    ok = in_process and all(cli_runs.values())
    record(9, "deterministic reports", ok,
           f"in-process report {len(first)} bytes identical: {in_process}; fresh processes {cli_runs}")
    assert in_process
    assert all(cli_runs.values())
