"""The basic entangled polynomial code (threshold ``pmn + p - 1``).

Worker i holds ``sum_{j,k} A_{j,k} y^(j + kp)`` and
``sum_{j,k'} B_{j,k'} y^(p - 1 - j + k'pm)``. In the product polynomial the
coefficient of ``x^(p - 1 + kp + k'pm)`` is exactly ``C_{k,k'}``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..blocks import BlockMatrix
from ..errors import DimensionMismatch, DuplicatePoint
from ..field import PrimeField, eval_poly, lagrange_interpolate
from .points import CodedShare, check_field_size, first_by_arrival


def basic_threshold(p: int, m: int, n: int) -> int:
    return p * m * n + p - 1


def _a_coefficients(A: BlockMatrix) -> list[np.ndarray]:
    p, m = A.grid
    coeffs = [None] * (p * m)
    for j in range(p):
        for k in range(m):
            coeffs[j + k * p] = A[j, k]
    return coeffs


def _b_coefficients(B: BlockMatrix, m: int) -> list[np.ndarray]:
    p, n = B.grid
    zero = np.zeros(B.block_shape, dtype=object)
    coeffs = [zero] * ((p - 1) + (n - 1) * p * m + 1)
    for j in range(p):
        for kk in range(n):
            coeffs[p - 1 - j + kk * p * m] = B[j, kk]
    return coeffs


def encode_basic(field: PrimeField, A: BlockMatrix, B: BlockMatrix, ys: Sequence[int]) -> list[CodedShare]:
    if A.grid[0] != B.grid[0] or A.block_shape[0] != B.block_shape[0]:
        raise DimensionMismatch(f"A grid {A.grid} and B grid {B.grid} disagree on p or block rows")
    if len(set(ys)) != len(ys):
        raise DuplicatePoint("worker points must be distinct")
    check_field_size(field, max(ys, default=0) + 1)
    m = A.grid[1]
    a_coeffs = _a_coefficients(A)
    b_coeffs = _b_coefficients(B, m)
    return [
        CodedShare(i, eval_poly(field, a_coeffs, y), eval_poly(field, b_coeffs, y), y, field)
        for i, y in enumerate(ys)
    ]


def decode_basic(
    field: PrimeField, results: Sequence[tuple[int, np.ndarray]], p: int, m: int, n: int
) -> np.ndarray:
    """Recover ``A^T B`` from ``(y_i, product_i)`` pairs, using the first ``pmn + p - 1``."""
    used = first_by_arrival(results, basic_threshold(p, m, n))
    xs = [y for y, _ in used]
    if len(set(xs)) != len(xs):
        raise DuplicatePoint("results carry repeated evaluation points")
    coeffs = lagrange_interpolate(field, xs, [v for _, v in used])
    grid = [[coeffs[p - 1 + k * p + kk * p * m] for kk in range(n)] for k in range(m)]
    return BlockMatrix.from_grid(grid).to_matrix()
