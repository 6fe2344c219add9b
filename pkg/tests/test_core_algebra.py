from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pretrlift.core_algebra import (
    GF,
    IDENTITY_MAP,
    QQ,
    Echelon,
    GradedElement,
    GradedMap,
    ModP,
    desuspend,
    field_from_spec,
    fukaya_sign,
    is_prime,
    nullspace,
    parity_sign,
    rank,
    solve,
    suspend,
    tensor_apply,
)

fractions = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 1000)
residues = st.integers(min_value=0, max_value=10)


@given(fractions, fractions, fractions)
def test_rational_field_axioms(a, b, c):
    a, b, c = QQ(a), QQ(b), QQ(c)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a + QQ.zero == a and a * QQ.one == a
    if a != 0:
        assert a * (QQ.one / a) == 1


@given(residues, residues, residues)
def test_prime_field_axioms(a, b, c):
    F = GF(11)
    a, b, c = F(a), F(b), F(c)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a - a == F.zero
    if a:
        assert a * (F.one / a) == F.one


def test_prime_field_rejects_composite_and_mixed_primes():
    with pytest.raises(ValueError):
        GF(9)
    with pytest.raises(ValueError):
        GF(5)(ModP(1, 7))


def test_rationals_reject_floats():
    with pytest.raises(TypeError):
        QQ(0.5)


def test_field_spec_parsing():
    assert field_from_spec("q") is QQ
    assert field_from_spec("fp:7").p == 7
    with pytest.raises(ValueError):
        field_from_spec("fp:8")
    with pytest.raises(ValueError):
        field_from_spec("reals")


def test_is_prime_small_table():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


# ---------------------------------------------------------------- signs


@given(st.lists(st.integers(-5, 5), max_size=6))
def test_fukaya_sign_with_nothing_passed_is_plus(degrees):
    assert fukaya_sign(degrees, 0) == 1


def test_fukaya_sign_examples():
    assert fukaya_sign([-1, -1], 1) == -1
    assert fukaya_sign([0, 1], 2) == -1
    with pytest.raises(IndexError):
        fukaya_sign([0], 2)


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6), st.data())
def test_fukaya_sign_is_multiplicative_over_prefixes(degrees, data):
    i = data.draw(st.integers(0, len(degrees)))
    j = data.draw(st.integers(i, len(degrees)))
    # passing j arguments = passing i, then the next j - i
    assert fukaya_sign(degrees, j) == fukaya_sign(degrees, i) * fukaya_sign(degrees[i:], j - i)


@given(st.integers(-20, 20))
def test_parity_sign_against_power(e):
    assert parity_sign(e) == (-1) ** (e % 2)


# ---------------------------------------------------------------- suspension


@given(st.integers(-4, 4), st.dictionaries(st.sampled_from("abc"), fractions, max_size=3))
def test_suspend_and_desuspend_are_inverse(deg, coeffs):
    v = GradedElement(deg, coeffs)
    down = suspend(v)
    assert down.degree == deg - 1
    assert desuspend(down) == v
    assert suspend(desuspend(down)) == down


def test_desuspend_needs_a_suspension():
    with pytest.raises(ValueError):
        desuspend(GradedElement(0, {"a": 1}))


def test_tensor_apply_signs():
    v, w = GradedElement(1, {"v": 1}), GradedElement(0, {"w": 1})
    odd = GradedMap(1, lambda x: GradedElement(x.degree + 1, x.coeffs))
    even = GradedMap(0, lambda x: x)
    sign, outs = tensor_apply([even, odd], [v, w])
    assert sign == -1 and outs[1].degree == 1
    sign, _ = tensor_apply([odd, even], [v, w])
    assert sign == 1
    sign, outs = tensor_apply([IDENTITY_MAP, IDENTITY_MAP], [v, w])
    assert sign == 1 and list(outs) == [v, w]


# ---------------------------------------------------------------- linear algebra


def _brute_rank_gf(rows, p, ncols):
    """Rank over GF(p) as log_p of the size of the row span, by enumeration."""
    span = set()
    for coeffs in product(range(p), repeat=len(rows)):
        vec = tuple(sum(c * r.get(j, 0) for c, r in zip(coeffs, rows)) % p for j in range(ncols))
        span.add(vec)
    r = 0
    while p ** r < len(span):
        r += 1
    return r


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(0, 2), min_size=3, max_size=3), min_size=1, max_size=4))
def test_rank_over_gf3_matches_enumeration(matrix):
    F = GF(3)
    rows = [{j: F(v) for j, v in enumerate(row) if v} for row in matrix]
    plain = [{j: v for j, v in enumerate(row) if v} for row in matrix]
    assert rank(rows) == _brute_rank_gf(plain, 3, 3)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4))
def test_rank_over_rationals_matches_sympy(matrix):
    import sympy

    rows = [{j: Fraction(v) for j, v in enumerate(row) if v} for row in matrix]
    assert rank(rows) == sympy.Matrix(matrix).rank()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=5))
def test_nullspace_vectors_are_killed_and_count_is_right(columns_dense):
    columns = [{i: Fraction(v) for i, v in enumerate(col) if v} for col in columns_dense]
    kernel = nullspace(columns, Fraction(1))
    assert len(kernel) == len(columns) - rank(columns)
    for vec in kernel:
        total = {}
        for j, c in vec.items():
            for i, v in columns[j].items():
                total[i] = total.get(i, 0) + c * v
        assert all(v == 0 for v in total.values())


def test_solve_returns_solution_with_free_variables_zero():
    columns = [{0: Fraction(1)}, {0: Fraction(1)}, {1: Fraction(2)}]
    sol = solve(columns, {0: Fraction(3), 1: Fraction(4)})
    assert sol == {0: 3, 2: 2}
    assert solve([{0: Fraction(1)}], {1: Fraction(1)}) is None


def test_echelon_reduce_and_preimage():
    ech = Echelon([{0: Fraction(1), 1: Fraction(1)}, {1: Fraction(1)}], track=True)
    assert ech.rank == 2
    assert ech.contains({0: Fraction(5)})
    rem, _ = ech.reduce({0: Fraction(2), 1: Fraction(2)})
    assert not rem
