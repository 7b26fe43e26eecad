import dataclasses
import json

import numpy as np
import pytest

from epcodes.bilinear import (
    BilinearConstruction,
    apply,
    brent_tensor,
    construction_to_json,
    dump_construction,
    load_construction,
    naive_construction,
    strassen_222,
    strassen_power,
    tensor_compose,
    validate,
)
from epcodes.blocks import partition
from epcodes.errors import DimensionMismatch, InvalidConstruction
from epcodes.field import PrimeField, field_context


def direct(F, A, B):
    return F.tmatmul(A, B)


def run(F, cons, A, B):
    p, m, n = cons.shape
    return apply(F, cons, partition(A, p, m), partition(B, p, n)).to_matrix()


def corrupted_strassen():
    s = strassen_222()
    a = s.a.copy()
    a[3, 1, 1] = a[3, 1, 1] + 1
    return dataclasses.replace(s, a=a, name="corrupted")


def test_naive_small():
    one = naive_construction(1, 1, 1)
    assert one.R == 1
    assert one.a.tolist() == [[[1]]] and one.b.tolist() == [[[1]]] and one.c.tolist() == [[[1]]]
    assert naive_construction(2, 2, 2).R == 8
    c = naive_construction(3, 2, 4)
    assert c.R == 24 and validate(c, field_context())


@pytest.mark.parametrize("q", [7, 2**61 - 1])
def test_strassen_validates(q):
    s = strassen_222()
    assert s.R == 7
    assert validate(s, PrimeField(q))
    assert set(np.unique(s.reduced(PrimeField(q))[0]).tolist()) <= {0, 1, q - 1}


def test_naive_all_small_shapes():
    F = field_context()
    for p in range(1, 4):
        for m in range(1, 4):
            for n in range(1, 4):
                assert validate(naive_construction(p, m, n), F), (p, m, n)


def test_compositions():
    F = field_context()
    s = strassen_222()
    ss = tensor_compose(s, s)
    assert ss.shape == (4, 4, 4) and ss.R == 49 and validate(ss, F)
    sn = tensor_compose(s, naive_construction(2, 2, 2))
    assert sn.shape == (4, 4, 4) and sn.R == 56 and validate(sn, F)
    assert validate(tensor_compose(naive_construction(2, 1, 3), s), F)


def test_compose_with_unit_is_identity():
    s = strassen_222()
    u = tensor_compose(naive_construction(1, 1, 1), s)
    assert u.shape == s.shape and u.R == s.R
    assert np.array_equal(u.a, s.a) and np.array_equal(u.b, s.b) and np.array_equal(u.c, s.c)


def test_rank_multiplies():
    a, b = naive_construction(1, 2, 1), naive_construction(2, 1, 2)
    assert tensor_compose(a, b).R == a.R * b.R
    assert strassen_power(3).R == 343


def test_corrupted_rejected_with_counterexample():
    F = field_context()
    bad = corrupted_strassen()
    result = validate(bad, F)
    assert not result and len(result.counterexample) == 6
    assert not validate(bad, F, mode="randomized")


def test_failing_brent_has_witness_input():
    """A violated Brent index (j,k,j',k',l,l') gives unit inputs on which apply is wrong."""
    F = field_context()
    bad = corrupted_strassen()
    j, k, jj, kk, l, ll = validate(bad, F).counterexample
    A = F.zeros((2, 2))
    B = F.zeros((2, 2))
    A[j, k] = 1
    B[jj, kk] = 1
    assert run(F, bad, A, B)[l, ll] != direct(F, A, B)[l, ll]


def test_brent_tensor_matches_indicator():
    F = PrimeField(11)
    t = brent_tensor(naive_construction(2, 1, 2), F)
    for idx in np.ndindex(t.shape):
        j, k, jj, kk, l, ll = idx
        assert t[idx] == int(j == jj and k == l and kk == ll)


def test_apply_scalar_example():
    F = PrimeField(7)
    one = naive_construction(1, 1, 1)
    assert run(F, one, F.matrix([[3]]), F.matrix([[4]]))[0, 0] == 5


@pytest.mark.parametrize("builder", [strassen_222, lambda: strassen_power(2),
                                     lambda: tensor_compose(strassen_222(), naive_construction(2, 2, 2))])
def test_apply_matches_direct(builder, rng):
    F = field_context()
    cons = builder()
    p, m, n = cons.shape
    A = F.random_matrix(rng, (2 * p, 3 * m))
    B = F.random_matrix(rng, (2 * p, n))
    assert np.array_equal(run(F, cons, A, B), direct(F, A, B))


def test_apply_many_random_small(rng):
    F = PrimeField(101)
    cons = strassen_222()
    for _ in range(100):
        A = F.random_matrix(rng, (2, 2))
        B = F.random_matrix(rng, (2, 2))
        assert np.array_equal(run(F, cons, A, B), direct(F, A, B))


def test_apply_dimension_mismatch(F, rng):
    s = strassen_222()
    with pytest.raises(DimensionMismatch):
        apply(F, s, partition(F.random_matrix(rng, (3, 2)), 3, 2), partition(F.random_matrix(rng, (2, 2)), 2, 2))


def test_json_roundtrip(tmp_path):
    F = field_context()
    path = tmp_path / "s.json"
    dump_construction(strassen_222(), path)
    loaded = load_construction(path, F)
    assert loaded.R == 7 and validate(loaded, F)


def test_json_loader_rejects_invalid(tmp_path):
    F = field_context()
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(construction_to_json(corrupted_strassen())))
    with pytest.raises(InvalidConstruction):
        load_construction(path, F)
    path.write_text("{not json")
    with pytest.raises(InvalidConstruction):
        load_construction(path, F)


def test_shape_checked():
    with pytest.raises(InvalidConstruction):
        BilinearConstruction(2, 2, 2, np.zeros((7, 2, 2), dtype=object), np.zeros((7, 2, 2), dtype=object),
                             np.zeros((6, 2, 2), dtype=object))
