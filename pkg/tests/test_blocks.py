import numpy as np
import pytest

from epcodes.blocks import BlockMatrix, pad_to, partition, unpad
from epcodes.errors import IndivisibleDimensions


def test_partition_roundtrip(F, rng):
    M = F.random_matrix(rng, (4, 4))
    B = partition(M, 2, 2)
    assert B.grid == (2, 2) and B.block_shape == (2, 2)
    assert np.array_equal(B.to_matrix(), M)
    assert np.array_equal(B[1, 0], M[2:4, 0:2])


def test_partition_shapes(F, rng):
    B = partition(F.random_matrix(rng, (4, 6)), 2, 3)
    assert B.block_shape == (2, 2)
    assert B.shape == (4, 6)


def test_partition_indivisible(F, rng):
    with pytest.raises(IndivisibleDimensions):
        partition(F.random_matrix(rng, (4, 6)), 3, 2)


def test_pad_and_unpad(F, rng):
    M = F.random_matrix(rng, (5, 7))
    padded, shape = pad_to(M, 2, 3)
    assert padded.shape == (6, 9)
    assert shape == (5, 7)
    assert np.array_equal(unpad(padded, shape), M)
    assert all(v == 0 for v in padded[5:].ravel())


def test_from_grid(F, rng):
    blocks = [[F.random_matrix(rng, (2, 1)) for _ in range(3)] for _ in range(2)]
    B = BlockMatrix.from_grid(blocks)
    assert B.grid == (2, 3)
    assert np.array_equal(B[1, 2], blocks[1][2])
