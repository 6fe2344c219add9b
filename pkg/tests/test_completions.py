import random

import pytest
from hypothesis import given, settings, strategies as st

from pretrlift.beilinson_geometry import BeilinsonCategory, random_line_bundle_complex
from pretrlift.completions import (
    CompletionError,
    DirectSum,
    Pretr,
    Shift,
    SumCompletion,
    Twisted,
    TranslationCompletion,
    TwistCompletion,
    check_maurer_cartan,
    cone_objects,
)
from pretrlift.dg_kernel import Morphism


def test_translation_degree_composition_and_differential(two_lifts):
    B = two_lifts.B
    T = TranslationCompletion(B)
    beta = T.wrap(B.path("beta"), -1, 0)
    gamma = T.wrap(B.path("gamma"), -2, -1)
    assert beta.degree == 1
    assert T.compose(gamma, beta) == T.wrap(B.path("gamma*beta"), -2, 0)
    omega = T.wrap(B.path("omega"), -2, 0)
    assert T.d(omega) == T.wrap(B.path("gamma*beta"), -2, 0)
    # odd target shift flips the sign of d
    assert T.d(T.wrap(B.path("omega"), -1, 0)) == -T.wrap(B.path("gamma*beta"), -1, 0)


def test_empty_sum_is_zero_object(b2):
    S = SumCompletion(b2)
    Z = DirectSum(())
    assert S.identity(Z).is_zero()
    assert S.hom_basis(Z, DirectSum(("O",))).dimension() == 0


def test_sum_d_is_entrywise_and_identities_idempotent(two_lifts):
    B = two_lifts.B
    S = SumCompletion(B)
    X = DirectSum(("A", "A"))
    Y = DirectSum(("C",))
    m = S.from_entries(X, Y, -1, {(0, 0): B.path("omega"), (0, 1): B.path("tau")})
    assert S.d(m) == S.from_entries(X, Y, 0, {(0, 0): B.path("gamma*beta"), (0, 1): B.path("gamma*beta")})
    ident = S.identity(X)
    assert S.compose(ident, ident) == ident


def test_twist_identity_and_zero_twist(two_lifts):
    B = two_lifts.B
    Tw = TwistCompletion(B)
    X = Tw.make_object("A")
    assert Tw.d(Tw.identity(X)).is_zero()
    omega = Morphism(X, Tw.make_object("C"), -1, B.path("omega").coeffs)
    assert Tw.under(Tw.d(omega)) == B.path("gamma*beta")


def test_maurer_cartan_examples(two_lifts):
    Q, B = two_lifts.Q, two_lifts.B
    assert check_maurer_cartan(Q, Q.zero("A", "A", 1))[0]
    assert check_maurer_cartan(two_lifts.source_hull.sums, two_lifts.complex.q)[0]
    hull = Pretr(B)
    with pytest.raises(CompletionError):
        hull.complex([("A", 0), ("B", -1), ("C", -2)], {(1, 0): B.path("beta"), (2, 1): B.path("gamma")})
    S = DirectSum((Shift("A", 0), Shift("B", -1), Shift("C", -2)))
    q = Morphism(S, S, 1, {(1, 0, ("beta",)): 1, (2, 1, ("gamma",)): 1})
    ok, residual = check_maurer_cartan(hull.sums, q)
    assert not ok
    assert {pos: set(m.coeffs) for pos, m in hull.sums.entries(residual).items()} == {(2, 0): {("gamma", "beta")}}
    with pytest.raises(CompletionError):
        check_maurer_cartan(hull.sums, Morphism(S, S, 0))


def test_diagonal_twist_rejected_and_permutation(b2):
    hull = Pretr(b2)
    S = DirectSum((Shift("O", -1), Shift("O(-1)", 0)))
    q = Morphism(S, S, 1, {(0, 1, ("x0",)): 1})
    X = hull.make_object(S, q)
    assert not hull.is_one_sided(X)
    Y, iso = hull.normalize_order(X)
    assert hull.is_one_sided(Y)
    assert hull.d(iso).is_zero()
    back = Morphism(Y, X, 0, {(i, j, k): c for (j, i, k), c in iso.coeffs.items()})
    assert hull.compose(back, iso) == hull.identity(X)
    assert hull.compose(iso, back) == hull.identity(Y)
    Sd = DirectSum((Shift("O", 0),))
    with pytest.raises(CompletionError):
        hull.normalize_order(Twisted(Sd, Morphism(Sd, Sd, 1, {(0, 0, ()): 1})))


def test_shift_and_twist_of_twist_normalize(b2):
    hull = Pretr(b2)
    X = hull.direct_sum([hull.embed_object("O(-1)"), hull.shift(hull.embed_object("O"), -1)])
    q = hull.from_entries(X, X, 1, {(1, 0): b2.path("x2")})
    Y = hull.twist(X, q)
    assert hull.is_one_sided(Y)
    assert hull.normalize(Shift(DirectSum(("O",)), 2)) == hull.shift(hull.embed_object("O"), 2)
    # shifting by one negates the twist and keeps MC
    Z = hull.shift(Y, 1)
    assert check_maurer_cartan(hull.sums, Z.q)[0]
    assert hull.entries(Z.q)[(1, 0)] == -b2.path("x2")


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_random_complexes_satisfy_mc_and_leibniz(seed):
    rng = random.Random(seed)
    B = BeilinsonCategory(2)
    hull = Pretr(B)
    X = random_line_bundle_complex(hull, rng)
    assert hull.is_one_sided(X)
    assert check_maurer_cartan(hull.sums, X.q)[0]
    O = hull.embed_object(rng.choice(B.test_objects()))
    for a in hull.basis_morphisms(X, O)[:4]:
        for b in hull.basis_morphisms(O, X)[:4]:
            lhs = hull.d(hull.compose(a, b))
            rhs = hull.compose(hull.d(a), b) + B.sign(a.degree) * hull.compose(a, hull.d(b))
            assert lhs == rhs


def test_cone_objects_are_one_sided(b2):
    hull = Pretr(b2)
    cones = cone_objects(hull, limit=3)
    assert len(cones) == 3 and all(hull.is_one_sided(c) for c in cones)
