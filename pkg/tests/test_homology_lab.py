import pytest

from pretrlift.beilinson_geometry import BeilinsonCategory, koszul_complex
from pretrlift.completions import Pretr
from pretrlift.homology_lab import (
    QuiverLiftError,
    decide_h0_isomorphic,
    hom_complex,
    quiver_functor_lift,
    solve_coboundary,
)


def test_hom_complex_of_the_example(two_lifts):
    B = two_lifts.B
    K = hom_complex(B, "A", "C")
    assert K.dim(0) == 1 and K.dim(-1) == 2
    assert K.check_d_squared()
    # omega - tau is the only closed degree -1 class; gamma*beta is exact
    assert K.cohomology_dims() == {-1: 1, 0: 0}
    assert K.d_matrix(-1) == [[1, 1]]


def test_solver_returns_least_witness(two_lifts):
    B = two_lifts.B
    K = hom_complex(B, "A", "C")
    w = solve_coboundary(K, B.path("gamma*beta"))
    assert w.verify(B)
    assert w.h == B.path("omega")
    with pytest.raises(ValueError):
        solve_coboundary(K, B.path("omega"))
    assert solve_coboundary(K, B.zero("A", "C", 0)).h.is_zero()


def test_non_coboundary_has_no_witness(b2):
    K = hom_complex(b2, "O(-1)", "O")
    assert solve_coboundary(K, b2.path("x0")) is None


def test_degree_minus_one_maps_between_images_vanish(two_lifts):
    from pretrlift.lift_engine import f_sharp

    hull = two_lifts.hull
    X = f_sharp(two_lifts.lifts["F"].functor, two_lifts.source_hull).obj(two_lifts.complex)
    Y = f_sharp(two_lifts.lifts["G"].functor, two_lifts.source_hull).obj(two_lifts.complex)
    K = hom_complex(hull, X, Y)
    assert K.cohomology_dim(-1) == 0
    assert len(K.cocycles(0)) == 0


def test_isomorphism_decisions(b2):
    hull = Pretr(b2)
    O = hull.embed_object("O")
    assert decide_h0_isomorphic(hull, O, O).status == "isomorphic"
    verdict = decide_h0_isomorphic(hull, O, hull.embed_object("O(-1)"))
    assert verdict.status == "not isomorphic"
    # a cone of an isomorphism is zero in H⁰
    cone = hull.complex([("O", 0), ("O", -1)], {(1, 0): b2.identity("O")})
    assert decide_h0_isomorphic(hull, cone, hull.zero_object).status == "isomorphic"
    # negating the twist gives an isomorphic complex
    X = hull.complex([("O(-1)", 0), ("O", -1)], {(1, 0): b2.path("x0")})
    Y = hull.complex([("O(-1)", 0), ("O", -1)], {(1, 0): -b2.path("x0")})
    verdict = decide_h0_isomorphic(hull, X, Y)
    assert verdict.status == "isomorphic"
    u, v = verdict.witness["forward"], verdict.witness["backward"]
    assert hom_complex(hull, X, X).is_coboundary(hull.compose(v, u) - hull.identity(X))


def test_koszul_complex_is_not_zero(b2):
    hull = Pretr(b2)
    C = koszul_complex(2, hull)
    verdict = decide_h0_isomorphic(hull, C, hull.zero_object)
    assert verdict.status == "not isomorphic"


def test_lift_notes_opposite_sign_pin(two_lifts):
    lift = two_lifts.lifts["F"]
    assert lift.notes and "opposite sign" in lift.notes[0]
    assert lift.certificate.ok


def test_unpinned_lift_picks_solver_homotopy(two_lifts):
    Q, B, hull = two_lifts.Q, two_lifts.B, two_lifts.hull
    objects = {v: hull.embed_object(v) for v in "ABC"}
    arrows = {"beta": hull.embed(B.path("beta")), "gamma": hull.embed(B.path("gamma"))}
    lift = quiver_functor_lift(Q, hull, objects, arrows)
    h = lift.homotopies[(("gamma",), ("beta",))]
    assert hull.d(h) == -hull.embed(B.path("gamma*beta"))
    assert h == -hull.embed(B.path("omega"))


def test_bad_pin_rejected(two_lifts):
    Q, B, hull = two_lifts.Q, two_lifts.B, two_lifts.hull
    objects = {v: hull.embed_object(v) for v in "ABC"}
    arrows = {"beta": hull.embed(B.path("beta")), "gamma": hull.embed(B.path("gamma"))}
    with pytest.raises(QuiverLiftError):
        quiver_functor_lift(Q, hull, objects, arrows,
                            pins={(("gamma",), ("beta",)): hull.embed(B.path("omega - tau"))})


def test_long_paths_refused():
    B3 = BeilinsonCategory(3)
    hull = Pretr(B3)
    objects = {X: hull.embed_object(X) for X in B3.test_objects()}
    arrows = {a.name: hull.embed(B3.path(a.name)) for a in B3.presentation.arrows}
    with pytest.raises(QuiverLiftError):
        quiver_functor_lift(B3, hull, objects, arrows)


def test_non_functor_table_rejected(b2):
    hull = Pretr(b2)
    objects = {X: hull.embed_object(X) for X in b2.test_objects()}
    arrows = {a.name: hull.embed(b2.path(a.name)) for a in b2.presentation.arrows}
    arrows["x0"] = hull.embed(b2.path("x1"))
    with pytest.raises(QuiverLiftError):
        quiver_functor_lift(b2, hull, objects, arrows)
