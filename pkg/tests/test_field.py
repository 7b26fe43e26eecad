import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from epcodes.errors import DuplicateNode, NonPrimeModulus
from epcodes.field import (
    MERSENNE_61,
    Polynomial,
    PrimeField,
    eval_poly,
    field_context,
    lagrange_coefficient,
    lagrange_interpolate,
    lagrange_weights,
    matrix_rank,
)

Q = MERSENNE_61
elements = st.integers(min_value=0, max_value=Q - 1)
nonzero = st.integers(min_value=1, max_value=Q - 1)


def test_inverse_examples():
    F7 = PrimeField(7)
    assert F7.inv(3) == 5
    assert F7.inv(1) == 1
    F = field_context(Q)
    assert F.inv(2) == (Q + 1) // 2
    assert 2 * ((Q + 1) // 2) % Q == 1


def test_inverse_of_zero_rejected():
    with pytest.raises(ZeroDivisionError):
        PrimeField(7).inv(0)


@pytest.mark.parametrize("q", [0, 1, 4, 9, 2**61])
def test_non_prime_modulus(q):
    with pytest.raises(NonPrimeModulus):
        PrimeField(q)


def test_field_context_is_cached():
    assert field_context(11) is field_context(11)


@given(elements, elements, elements)
def test_ring_laws(a, b, c):
    F = field_context()
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(a, b) == F.add(a, F.neg(b))


@given(nonzero)
def test_inverse_property(a):
    F = field_context()
    assert F.mul(a, F.inv(a)) == 1
    assert F.div(a, a) == 1


@given(st.lists(nonzero, min_size=1, max_size=20))
def test_batch_inverse_matches_scalar(values):
    F = field_context()
    assert F.batch_inv(values) == [F.inv(v) for v in values]


def test_eval_poly_examples():
    F7 = PrimeField(7)
    assert eval_poly(F7, [0], 5) == 0
    assert eval_poly(F7, [1, 2, 3], 2) == 3
    assert Polynomial([1, 2, 3, 0, 0], F7)(2) == 3
    assert Polynomial([0, 0], F7).coeffs == ()
    assert Polynomial([1, 2, 3, 0], F7).degree == 2


def test_interpolate_examples():
    F7 = PrimeField(7)
    assert lagrange_interpolate(F7, [1, 2, 3], [5, 5, 5]) == [5, 0, 0]
    F11 = PrimeField(11)
    assert lagrange_interpolate(F11, [0, 1, 2], [0, 1, 4]) == [0, 0, 1]


def test_interpolate_duplicate_node():
    with pytest.raises(DuplicateNode):
        lagrange_interpolate(PrimeField(7), [1, 1], [2, 3])


def test_lagrange_coefficient_examples():
    F7 = PrimeField(7)
    assert lagrange_coefficient(F7, [1, 2], 0, 3) == 6
    xs = [3, 5, 6, 1]
    for j in range(4):
        for k in range(4):
            assert lagrange_coefficient(F7, xs, j, xs[k]) == int(j == k)


@settings(max_examples=50)
@given(st.lists(elements, min_size=1, max_size=12), st.data())
def test_interpolate_inverts_evaluate(coeffs, data):
    F = field_context()
    K = len(coeffs)
    xs = data.draw(st.lists(elements, min_size=K, max_size=K, unique=True))
    values = [eval_poly(F, coeffs, x) for x in xs]
    assert lagrange_interpolate(F, xs, values) == [c % Q for c in coeffs]


@given(st.lists(elements, min_size=1, max_size=10, unique=True), elements)
def test_partition_of_unity(xs, at):
    F = field_context()
    assert sum(lagrange_weights(F, xs, at)) % Q == 1


def test_matrix_interpolation_is_entrywise(rng):
    F = field_context()
    coeffs = [F.random_matrix(rng, (2, 3)) for _ in range(4)]
    xs = [10, 20, 30, 40]
    got = lagrange_interpolate(F, xs, [eval_poly(F, coeffs, x) for x in xs])
    for g, c in zip(got, coeffs):
        assert np.array_equal(g, c)


def test_random_polynomial_roundtrip(rng):
    F = field_context()
    poly = Polynomial.random(F, 7, rng)
    xs = list(range(100, 108))
    assert Polynomial.interpolate(F, xs, [poly(x) for x in xs]) == poly


def test_interpolation_order_independent(rng):
    F = PrimeField(101)
    xs = [3, 9, 27, 81, 42]
    ys = [F.random_element(rng) for _ in xs]
    perm = [4, 2, 0, 3, 1]
    assert lagrange_interpolate(F, xs, ys) == lagrange_interpolate(F, [xs[i] for i in perm], [ys[i] for i in perm])


def test_matrix_rank():
    F = PrimeField(7)
    assert matrix_rank(F, [[1, 2], [2, 4]]) == 1
    assert matrix_rank(F, [[1, 2], [3, 4]]) == 2
    assert matrix_rank(F, [[0, 0], [0, 0]]) == 0
    # singular only mod 7: det = 1*8 - 2*... = 7
    assert matrix_rank(F, [[1, 1], [1, 8]]) == 1


def test_random_matrix_in_range(rng):
    F = PrimeField(5)
    M = F.random_matrix(rng, (50, 50))
    assert M.dtype == object
    assert all(0 <= int(v) < 5 for v in M.ravel())
    assert {int(v) for v in M.ravel()} == set(range(5))
