"""Lagrange-encoded element-wise products: the improved, secure and batch codes.

Every mode here reduces ``A^T B`` to K element-wise products through a
bilinear construction (``K = R``, or ``L*R`` for a batch), then spreads the
two length-K vectors over the workers with Lagrange polynomials through
``x_1..x_K``. Products re-evaluated at ``x_1..x_K`` are recombined with the
construction's output tensor.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..bilinear import BilinearConstruction
from ..blocks import BlockMatrix
from ..errors import DimensionMismatch, DuplicatePoint, ShapeMismatch
from ..field import PrimeField, barycentric_weights, lagrange_weights
from .points import CodedShare, EvaluationPoints, check_field_size, first_by_arrival


def pre_encode(field: PrimeField, cons: BilinearConstruction, X: BlockMatrix, side: str) -> np.ndarray:
    """Map a block grid to R block-sized matrices, ``sum_{j,k} X_{j,k} coeff[i,j,k]``.

    Returns an object array of shape ``(R, block_rows, block_cols)``.
    """
    if side == "A":
        tensor, grid = cons.reduced(field)[0], (cons.p, cons.m)
    elif side == "B":
        tensor, grid = cons.reduced(field)[1], (cons.p, cons.n)
    else:
        raise ValueError("side must be 'A' or 'B'")
    if X.grid != grid:
        raise DimensionMismatch(f"{side} grid {X.grid} does not match construction grid {grid}")
    return np.tensordot(tensor, X.blocks, axes=([1, 2], [0, 1])) % field.q


def batch_pre_encode(
    field: PrimeField, cons: BilinearConstruction, pairs: Sequence[tuple[BlockMatrix, BlockMatrix]]
) -> tuple[np.ndarray, np.ndarray]:
    """Concatenate the pre-encoded vectors of L pairs, batch index major.

    Position ``l*R + i`` holds product ``i`` of pair ``l``.
    """
    if not pairs:
        raise ShapeMismatch("empty batch")
    a0, b0 = pairs[0]
    for A, B in pairs:
        if (A.grid, A.block_shape, B.grid, B.block_shape) != (a0.grid, a0.block_shape, b0.grid, b0.block_shape):
            raise ShapeMismatch("all batch pairs must share one partition and block shape")
    a_vec = np.concatenate([pre_encode(field, cons, A, "A") for A, _ in pairs])
    b_vec = np.concatenate([pre_encode(field, cons, B, "B") for _, B in pairs])
    return a_vec, b_vec


def combine(field: PrimeField, cons: BilinearConstruction, products: Sequence[np.ndarray], L: int = 1) -> list[np.ndarray]:
    """Turn ``L*R`` element-wise products into the L output matrices ``C``."""
    R = cons.R
    if len(products) != L * R:
        raise DimensionMismatch(f"expected {L * R} products, got {len(products)}")
    c = cons.reduced(field)[2]
    stacked = np.stack(list(products))
    out = []
    for ell in range(L):
        grid = np.tensordot(c, stacked[ell * R:(ell + 1) * R], axes=([0], [0])) % field.q
        out.append(BlockMatrix(grid).to_matrix())
    return out


def pad_with_keys(
    field: PrimeField, vec: np.ndarray, T: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Append T uniformly random block-sized keys. Returns ``(padded, keys)``."""
    if T < 0:
        raise ValueError("T must be non-negative")
    keys = field.random_matrix(rng, (T,) + vec.shape[1:])
    if T == 0:
        return vec, keys
    return np.concatenate([vec, keys]), keys


def lagrange_encode(field: PrimeField, vec: np.ndarray, xs: Sequence[int], ys: Sequence[int]) -> list[np.ndarray]:
    """Evaluate the Lagrange polynomial through ``(xs[:len(vec)], vec)`` at each y."""
    nodes = list(xs[: len(vec)])
    if len(nodes) < len(vec):
        raise DimensionMismatch(f"{len(vec)} values need as many nodes, got {len(nodes)}")
    weights = barycentric_weights(field, nodes)
    items = list(vec)
    return [field.linear_combination(lagrange_weights(field, nodes, y, weights), items) for y in ys]


def encode_lagrange_shares(
    field: PrimeField,
    a_padded: np.ndarray,
    b_padded: np.ndarray,
    points: EvaluationPoints,
    n_data: int,
    systematic: bool = False,
) -> list[CodedShare]:
    """Shares for vectors of lengths ``L_A`` and ``L_B``; threshold ``L_A + L_B - 1``.

    ``n_data`` is the count of genuine (non-key) entries. Worker points must
    avoid ``x_1..x_{n_data}`` unless ``systematic`` is set.
    """
    if not systematic:
        points.check_disjoint(n_data)
    check_field_size(field, max(points.xs + points.ys) + 1)
    a_shares = lagrange_encode(field, a_padded, points.xs, points.ys)
    b_shares = lagrange_encode(field, b_padded, points.xs, points.ys)
    return [
        CodedShare(i, a, b, y, field)
        for i, (y, a, b) in enumerate(zip(points.ys, a_shares, b_shares))
    ]


def recover_products(
    field: PrimeField,
    results: Sequence[tuple[int, np.ndarray]],
    xs: Sequence[int],
    n_data: int,
    needed: int,
) -> list[np.ndarray]:
    """Re-evaluate the product polynomial at ``x_1..x_{n_data}`` from ``(y, value)`` pairs.

    If every ``x_r`` already appears among the result points (systematic
    workers), those values are returned directly without interpolation.
    Otherwise the first ``needed`` results by arrival are interpolated.
    """
    targets = [int(x) % field.q for x in xs[:n_data]]
    by_point = {}
    for y, value in results:
        by_point.setdefault(int(y) % field.q, value)
    if all(t in by_point for t in targets):
        return [by_point[t] for t in targets]

    used = first_by_arrival(results, needed)
    ys = [int(y) % field.q for y, _ in used]
    if len(set(ys)) != len(ys):
        raise DuplicatePoint("results carry repeated evaluation points")
    values = [v for _, v in used]
    weights = barycentric_weights(field, ys)
    return [field.linear_combination(lagrange_weights(field, ys, t, weights), values) for t in targets]


def decode_lagrange(
    field: PrimeField,
    results: Sequence[tuple[int, np.ndarray]],
    xs: Sequence[int],
    cons: BilinearConstruction,
    la: int,
    lb: int,
    L: int = 1,
) -> list[np.ndarray]:
    """Decode the L output matrices from at least ``la + lb - 1`` results.

    Key positions ``x_{K+1}..`` are never evaluated.
    """
    products = recover_products(field, results, xs, L * cons.R, la + lb - 1)
    return combine(field, cons, products, L)
