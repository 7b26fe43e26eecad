import numpy as np
import pytest

from epcodes.bilinear import naive_construction, strassen_222
from epcodes.codes.scheme import SchemeInputs, encode, make_descriptor, random_inputs
from epcodes.errors import InsufficientFieldSize, InvalidConstruction, SchemeError, ShapeMismatch
from epcodes.field import PrimeField


def test_N_below_threshold_names_threshold(strassen):
    with pytest.raises(SchemeError, match="threshold 13"):
        make_descriptor("improved", N=12, construction=strassen)


def test_mode_option_rules(strassen):
    with pytest.raises(SchemeError):
        make_descriptor("improved", N=14, T=1, construction=strassen)
    with pytest.raises(SchemeError):
        make_descriptor("basic", N=9, p=2, m=2, n=2, L=2)
    with pytest.raises(SchemeError):
        make_descriptor("improved", N=14, construction=None, p=2, m=2, n=2)
    with pytest.raises(SchemeError):
        make_descriptor("fully_secure", N=20, T=1, construction=strassen, systematic=True)
    with pytest.raises(SchemeError):
        make_descriptor("improved", N=14, M=2, construction=strassen)
    with pytest.raises(SchemeError):
        make_descriptor("improved", N=20, construction=strassen, p=3)


def test_invalid_construction_rejected(strassen):
    import dataclasses
    a = strassen.a.copy()
    a[0, 0, 0] = 5
    with pytest.raises(InvalidConstruction):
        make_descriptor("improved", N=14, construction=dataclasses.replace(strassen, a=a))


def test_field_size_rule():
    cons = naive_construction(1, 1, 1)
    # q must exceed N + R + T + 1
    make_descriptor("fully_secure", N=3, T=1, construction=cons, field=PrimeField(7))
    with pytest.raises(InsufficientFieldSize):
        make_descriptor("fully_secure", N=4, T=1, construction=cons, field=PrimeField(7))


def test_default_points(strassen):
    d = make_descriptor("one_sided_secure", N=15, T=2, construction=strassen)
    assert d.points.xs == tuple(range(10))
    assert d.points.ys == tuple(range(9, 24))
    assert d.label == "one_sided_secure"
    assert make_descriptor("batch_improved", N=27, L=2, construction=strassen).label == "batch_improved"


def test_params_and_replace(strassen):
    d = make_descriptor("improved", N=14, construction=strassen, seed=3)
    p = d.params()
    assert p["threshold"] == 13 and p["baseline"] == 9 and p["R"] == 7 and p["seed"] == 3
    d2 = d.replace(N=20)
    assert d2.N == 20 and len(d2.points.ys) == 20


def test_input_shapes_checked(F, rng, strassen):
    d = make_descriptor("batch_improved", N=27, L=2, construction=strassen)
    with pytest.raises(ShapeMismatch):
        encode(d, SchemeInputs.pair(F.random_matrix(rng, (4, 4)), F.random_matrix(rng, (4, 4))), rng)


def test_encode_deterministic_given_seed(strassen):
    d = make_descriptor("fully_secure", N=17, T=2, construction=strassen, seed=9)
    inputs = random_inputs(d, np.random.default_rng(0), 4, 4, 4)
    r1 = encode(d, inputs).compute_all()
    r2 = encode(d, inputs).compute_all()
    assert all(np.array_equal(a, b) for (_, a), (_, b) in zip(r1, r2))
