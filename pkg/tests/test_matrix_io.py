import numpy as np
import pytest

from epcodes.errors import MalformedHeader, ValueOutOfRange
from epcodes.field import MERSENNE_61, PrimeField
from epcodes.matrix_io import MAGIC, read_binary, read_matrix, read_text, write_binary, write_text


def test_text_roundtrip(tmp_path, F, rng):
    M = F.random_matrix(rng, (4, 6))
    write_text(tmp_path / "m.txt", M, F.q)
    got, q = read_text(tmp_path / "m.txt")
    assert q == MERSENNE_61 and np.array_equal(got, M)
    assert (tmp_path / "m.txt").read_text().splitlines()[0] == f"{MERSENNE_61} 4 6"


def test_binary_roundtrip_and_cross_format(tmp_path, F, rng):
    M = F.random_matrix(rng, (4, 6))
    write_binary(tmp_path / "m.bin", M, F.q)
    write_text(tmp_path / "m.txt", M, F.q)
    assert (tmp_path / "m.bin").read_bytes().startswith(MAGIC)
    b, qb = read_binary(tmp_path / "m.bin")
    t, qt = read_matrix(tmp_path / "m.txt")
    assert qb == qt and np.array_equal(b, t) and np.array_equal(b, M)
    assert np.array_equal(read_matrix(tmp_path / "m.bin")[0], M)


def test_value_out_of_range(tmp_path):
    (tmp_path / "m.txt").write_text("7 1 2\n3 7\n")
    with pytest.raises(ValueOutOfRange):
        read_text(tmp_path / "m.txt")
    with pytest.raises(ValueOutOfRange):
        write_text(tmp_path / "w.txt", np.array([[9]], dtype=object), 7)


@pytest.mark.parametrize("content", ["7 2\n1 2\n", "7 2 2\n1 2 3\n", "x 1 1\n0\n", "7 1 1\n a\n"])
def test_malformed_text(tmp_path, content):
    (tmp_path / "m.txt").write_text(content)
    with pytest.raises(MalformedHeader):
        read_text(tmp_path / "m.txt")


def test_malformed_binary(tmp_path):
    (tmp_path / "m.bin").write_bytes(MAGIC + b"\x00" * 5)
    with pytest.raises(MalformedHeader):
        read_binary(tmp_path / "m.bin")
    write_binary(tmp_path / "ok.bin", np.array([[1, 2]], dtype=object), 7)
    data = (tmp_path / "ok.bin").read_bytes()
    (tmp_path / "trunc.bin").write_bytes(data[:-8])
    with pytest.raises(MalformedHeader):
        read_binary(tmp_path / "trunc.bin")


def test_small_field_roundtrip(tmp_path, rng):
    F = PrimeField(5)
    M = F.random_matrix(rng, (3, 3))
    write_binary(tmp_path / "m.bin", M, 5)
    assert np.array_equal(read_matrix(tmp_path / "m.bin")[0], M)
