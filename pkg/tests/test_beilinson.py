import random
from itertools import combinations_with_replacement
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from pretrlift.beilinson_geometry import (
    BeilinsonCategory,
    WindowError,
    check_window,
    fm_pipeline,
    koszul_complex,
    line_bundle,
    product_category,
    pullback_functor,
    random_line_bundle_complex,
    resolution_functor_p1,
    sym_dimension,
    tensor_with_kernel,
    twist_of,
)
from pretrlift.completions import Pretr, check_maurer_cartan
from pretrlift.homology_lab import hom_complex
from pretrlift.lift_engine import f_sharp


def test_labels():
    assert line_bundle(0) == "O" and line_bundle(-2) == "O(-2)"
    assert twist_of("O(-3)") == -3 and twist_of("O") == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_hom_dimensions_are_monomial_counts(n):
    B = BeilinsonCategory(n)
    for i in range(-n, 1):
        for j in range(-n, 1):
            expected = comb(n + j - i, n) if j >= i else 0
            assert B.hom_basis(line_bundle(i), line_bundle(j)).dimension() == expected


def test_sym_dimension_matches_enumeration():
    for v in range(1, 4):
        for d in range(5):
            assert sym_dimension(v, d) == len(list(combinations_with_replacement(range(v), d)))
    assert [sym_dimension(3, 4 - j) for j in range(3)] == [15, 10, 6]


def test_monomial_round_trip(b2):
    m = b2.from_monomial(-2, 0, (1, 1, 0))
    assert m == b2.path("x0*y1")
    (key,) = m.coeffs
    assert b2.monomial(key) == (1, 1, 0)


@pytest.mark.parametrize("n", [2, 3])
def test_koszul_complex_is_mc_and_exact_against_generators(n):
    hull = Pretr(BeilinsonCategory(n))
    C = koszul_complex(n, hull)
    assert hull.is_one_sided(C)
    assert check_maurer_cartan(hull.sums, C.q)[0]
    # C resolves O(-n-1), which is right-orthogonal to O(-n), ..., O(-1) in H⁰
    for j in range(1, n + 1):
        K = hom_complex(hull, hull.embed_object(line_bundle(-j)), C)
        assert all(v == 0 for v in K.cohomology_dims().values())


def test_product_window():
    P = product_category(1, 1)
    assert P.bundle(-1, 0) == "O(-1)xO"
    with pytest.raises(WindowError):
        P.bundle(-2, 0)
    hat = product_category(1, 1, hat=True)
    assert hat.bundle(-2, -2) == "O(-2)xO(-2)"
    outside = Pretr(hat).embed_object("O(-2)xO")
    with pytest.raises(WindowError):
        check_window(Pretr(P), outside)
    check_window(Pretr(P), Pretr(P).embed_object("O(-1)xO"))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_tensor_of_random_complexes_is_mc(seed):
    rng = random.Random(seed)
    src = Pretr(product_category(1, 1))
    tgt = Pretr(product_category(1, 1, hat=True))
    X = random_line_bundle_complex(src, rng, max_terms=2)
    K = random_line_bundle_complex(src, rng, max_terms=2)
    T = tensor_with_kernel(K, X, src, tgt)
    assert tgt.is_one_sided(T)
    assert check_maurer_cartan(tgt.sums, T.q)[0]


def test_tensor_with_structure_sheaf_kernel_is_identity_on_summands():
    src = Pretr(product_category(1, 1))
    tgt = Pretr(product_category(1, 1, hat=True))
    X = random_line_bundle_complex(src, random.Random(3))
    T = tensor_with_kernel(src.embed_object("OxO"), X, src, tgt)
    assert tgt.summands(T) == src.summands(X)

    def shape(hull, q):
        P = hull.ground
        return {pos: {P.monomials(k): c for k, c in m.coeffs.items()} for pos, m in hull.entries(q).items()}

    assert shape(tgt, T.q) == shape(src, X.q)


def test_resolution_functor_relation_and_fm_pipeline():
    lift = resolution_functor_p1()
    assert lift.certificate.ok
    P = lift.functor
    mid = P.target
    K = mid.embed_object("O(-1)xO")
    pipe = fm_pipeline(1, 0, K, P)
    assert pipe.validate()["ok"]
    src = pipe.source_hull
    assert pipe.apply(src.embed_object("O")).obj.summands == ()
    Y = pipe.apply(src.embed_object("O(-1)"))
    assert pipe.target_hull.summands(Y) == [("O", -1)]


def test_pullback_is_fully_faithful_on_generators():
    table, ext, src = pullback_functor(1, 1)
    T = table.hull
    for X in src.ground.test_objects():
        for Y in src.ground.test_objects():
            a = hom_complex(src, src.embed_object(X), src.embed_object(Y)).cohomology_dim(0)
            b = hom_complex(T, ext.obj(src.embed_object(X)), ext.obj(src.embed_object(Y))).cohomology_dim(0)
            assert a == b


def test_twist_model_image_of_koszul(twist_model):
    F = twist_model.functor
    hull = F.target
    X = f_sharp(F, hull).obj(koszul_complex(2, hull))
    assert hull.is_one_sided(X)
    assert len(hull.summands(X)) == 25
