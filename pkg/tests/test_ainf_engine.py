import random

import pytest
from hypothesis import given, settings, strategies as st

from pretrlift.ainf_engine import (
    AInfView,
    IdentityFunctor,
    TableFunctor,
    basis_chains,
    check_functor_relation,
    check_relation_suite,
    check_stasheff,
    degenerate_chain_skip,
    h0_functor,
    random_chains,
    relation_terms,
)
from pretrlift.completions import Pretr
from pretrlift.core_algebra import fukaya_sign


def test_b1_b2_examples(two_lifts):
    B = two_lifts.B
    V = AInfView(B)
    assert V.b1(B.identity("A")).is_zero()
    assert V.b1(B.path("omega")) == -B.path("gamma*beta")
    beta = B.path("beta")
    assert V.b2(B.identity("B"), beta) == beta
    # (-1)^{|omega|} on the left factor
    assert V.b2(B.path("omega"), B.identity("A")) == -B.path("omega")


def test_stasheff_on_examples(two_lifts, b2):
    for C in (two_lifts.Q, two_lifts.B, b2):
        report = check_stasheff(C)
        assert report.ok and report.checked[3] > 0


def test_identity_functor_satisfies_relation(b2):
    report = check_relation_suite(IdentityFunctor(b2), b2.test_objects(), max_length=3)
    assert report.ok and report.checked[2] > 0


def test_n1_residual_is_chain_map_defect(two_lifts):
    F = two_lifts.lifts["F"].functor
    omega_free = two_lifts.Q.path("beta")
    t = relation_terms(F, (omega_free,))
    assert t["B"].is_zero() and t["C"].is_zero()
    assert check_functor_relation(F, (omega_free,)) == t["A"] - t["D"]


def test_degenerate_chain_detection(two_lifts, b2):
    Q = two_lifts.Q
    assert degenerate_chain_skip((b2.path("x0"), b2.identity("O(-1)")), b2)
    assert not degenerate_chain_skip((b2.path("x1"), b2.path("y0")), b2)
    chain = (Q.path("gamma"), Q.field(2) * Q.identity("B"), Q.path("beta"))
    assert degenerate_chain_skip(chain, Q)
    # the shortcut is sound: a strictly unital functor has zero residual there
    assert check_functor_relation(two_lifts.lifts["F"].functor, chain).is_zero()


def test_negated_f2_breaks_relation(two_lifts):
    """Negating the relation-checked F₂ leaves a nonzero residual on (γ, β)."""
    F = two_lifts.lifts["F"].functor
    flipped = TableFunctor(F.source, F.target, F.objects,
                           {1: F.tables[1], 2: {k: -v for k, v in F.tables[2].items()}})
    Q = two_lifts.Q
    chain = (Q.path("gamma"), Q.path("beta"))
    assert check_functor_relation(F, chain).is_zero()
    assert not check_functor_relation(flipped, chain).is_zero()


def test_f2_value_is_plus_omega(two_lifts):
    F = two_lifts.lifts["F"].functor
    Q, hull = two_lifts.Q, two_lifts.hull
    assert F.fn((Q.path("gamma"), Q.path("beta"))) == hull.embed(two_lifts.B.path("omega"))


def test_f0_is_not_functor_data(two_lifts):
    with pytest.raises(ValueError):
        two_lifts.lifts["F"].functor.fn(())


def test_h0_functor(two_lifts, twist_model):
    for label in ("F", "G"):
        H = h0_functor(two_lifts.lifts[label].functor)
        Q = two_lifts.Q
        assert H.mor(Q.identity("A")) == two_lifts.hull.identity(H.obj("A"))
        assert H.mor(Q.path("beta")) == two_lifts.hull.embed(two_lifts.B.path("beta"))
        assert H.respects_composition(Q.path("gamma"), Q.path("beta")) is not None
    H = h0_functor(twist_model.functor)
    B = H.F.source
    assert H.mor(B.path("x1")) == H.F.target.embed(B.path("y1"))
    witness = H.respects_composition(B.path("x1"), B.path("y0"))
    assert witness is not None and witness.verify(H.F.target)
    with pytest.raises(ValueError):
        h0_functor(two_lifts.lifts["F"].functor).mor(two_lifts.Q.zero("A", "C", 1))


def test_basis_chain_counts(b2):
    objs = b2.test_objects()
    # composable chains of length 2 through basis morphisms (identities included)
    expected = sum(
        b2.hom_basis(X, Y).dimension() * b2.hom_basis(Y, Z).dimension()
        for X in objs for Y in objs for Z in objs
    )
    assert sum(1 for _ in basis_chains(b2, objs, 2)) == expected


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=6), st.data())
def test_fukaya_sign_counts_left_degrees(degs, data):
    i = data.draw(st.integers(0, len(degs) - 1))
    assert fukaya_sign(degs, i) == (-1) ** sum(degs[:i])


def test_random_chains_are_composable_and_nondegenerate(b2):
    rng = random.Random(1)
    chains = random_chains(b2, b2.test_objects(), 2, 20, rng)
    assert len(chains) == 20
    for left, right in chains:
        assert right.target == left.source
        assert not degenerate_chain_skip((left, right), b2)


def test_stasheff_detects_a_sign_slip(b2):
    from pretrlift.completions import TwistCompletion, cone_objects
    from pretrlift.core_algebra import parity_sign
    from pretrlift.dg_kernel import Morphism

    class SlippedTwists(TwistCompletion):
        def _d(self, m):
            alpha = self.under(m)
            total = self.base.d(alpha) + self.base.compose(m.target.q, alpha)
            total = total + parity_sign(m.degree) * self.base.compose(alpha, m.source.q)
            return Morphism(m.source, m.target, m.degree + 1, total.coeffs)

    hull = Pretr(b2)
    cones = cone_objects(hull, limit=2)
    good = check_stasheff(TwistCompletion(hull.sums), cones)
    bad = check_stasheff(SlippedTwists(hull.sums), cones)
    assert good.ok
    assert not bad.ok
