"""Rank-R bilinear algorithms for block matrix products ``A^T B``.

A construction is a tensor triple ``(a, b, c)`` with shapes ``R x p x m``,
``R x p x n`` and ``R x m x n``. Product ``i`` multiplies
``sum_{j,k} a[i,j,k] A_{j,k}`` (transposed) by ``sum_{j,k'} b[i,j,k'] B_{j,k'}``,
and output block ``C_{l,l'}`` is ``sum_i c[i,l,l'] * product_i``.

Coefficients are stored as plain (possibly negative) integers so one
construction can be used over any prime field; they are reduced mod q at use.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .blocks import BlockMatrix
from .errors import DimensionMismatch, InvalidConstruction
from .field import PrimeField


@dataclass(frozen=True, eq=False)
class BilinearConstruction:
    p: int
    m: int
    n: int
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        R = self.a.shape[0]
        expected = {"a": (R, self.p, self.m), "b": (R, self.p, self.n), "c": (R, self.m, self.n)}
        for key, shape in expected.items():
            if getattr(self, key).shape != shape:
                raise InvalidConstruction(
                    f"tensor {key} has shape {getattr(self, key).shape}, expected {shape}"
                )

    @property
    def R(self) -> int:
        return self.a.shape[0]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.p, self.m, self.n

    def reduced(self, field: PrimeField) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        q = field.q
        return self.a % q, self.b % q, self.c % q

    def __repr__(self) -> str:
        return f"BilinearConstruction({self.name}, p={self.p}, m={self.m}, n={self.n}, R={self.R})"


def _tensor(values, shape) -> np.ndarray:
    arr = np.empty(shape, dtype=object)
    arr[...] = np.array(values, dtype=object).reshape(shape)
    return arr


def naive_construction(p: int, m: int, n: int) -> BilinearConstruction:
    """The uncoded ``pmn``-product algorithm, one product per ``(j, k, k')``."""
    if min(p, m, n) < 1:
        raise ValueError("p, m, n must be positive")
    R = p * m * n
    a = np.zeros((R, p, m), dtype=object)
    b = np.zeros((R, p, n), dtype=object)
    c = np.zeros((R, m, n), dtype=object)
    i = 0
    for j in range(p):
        for k in range(m):
            for kk in range(n):
                a[i, j, k] = 1
                b[i, j, kk] = 1
                c[i, k, kk] = 1
                i += 1
    return BilinearConstruction(p, m, n, a, b, c, name=f"naive({p},{m},{n})")


# Strassen's seven products for X Y with X = A^T, i.e. X[k][j] = A_{j,k}^T.
# Each row: (left coefficients on X as {(row, col): coeff}, right on Y, output usage on C).
_STRASSEN = [
    ({(0, 0): 1, (1, 1): 1}, {(0, 0): 1, (1, 1): 1}, {(0, 0): 1, (1, 1): 1}),
    ({(1, 0): 1, (1, 1): 1}, {(0, 0): 1}, {(1, 0): 1, (1, 1): -1}),
    ({(0, 0): 1}, {(0, 1): 1, (1, 1): -1}, {(0, 1): 1, (1, 1): 1}),
    ({(1, 1): 1}, {(1, 0): 1, (0, 0): -1}, {(0, 0): 1, (1, 0): 1}),
    ({(0, 0): 1, (0, 1): 1}, {(1, 1): 1}, {(0, 0): -1, (0, 1): 1}),
    ({(1, 0): 1, (0, 0): -1}, {(0, 0): 1, (0, 1): 1}, {(1, 1): 1}),
    ({(0, 1): 1, (1, 1): -1}, {(1, 0): 1, (1, 1): 1}, {(0, 0): 1}),
]


def strassen_222() -> BilinearConstruction:
    """Strassen's rank-7 algorithm for 2x2 block grids.

    The left factor is stated on ``X = A^T``, so ``a[i, j, k]`` takes the
    coefficient of ``X[k][j]``.
    """
    a = np.zeros((7, 2, 2), dtype=object)
    b = np.zeros((7, 2, 2), dtype=object)
    c = np.zeros((7, 2, 2), dtype=object)
    for i, (left, right, out) in enumerate(_STRASSEN):
        for (row, col), v in left.items():
            a[i, col, row] = v
        for (row, col), v in right.items():
            b[i, row, col] = v
        for (row, col), v in out.items():
            c[i, row, col] = v
    return BilinearConstruction(2, 2, 2, a, b, c, name="strassen")


def tensor_compose(u: BilinearConstruction, v: BilinearConstruction) -> BilinearConstruction:
    """Block-of-blocks composition: ``u`` acts on the outer grid, ``v`` inside each block.

    Indices combine row-major, outer first: grid index ``j = j_u * p_v + j_v``
    and product index ``i = i_u * R_v + i_v``.
    """

    def kron(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        Rx, r1, c1 = x.shape
        Ry, r2, c2 = y.shape
        out = np.einsum("iab,jcd->ijacbd", x.astype(object), y.astype(object))
        return out.reshape(Rx * Ry, r1 * r2, c1 * c2)

    return BilinearConstruction(
        u.p * v.p, u.m * v.m, u.n * v.n,
        kron(u.a, v.a), kron(u.b, v.b), kron(u.c, v.c),
        name=f"({u.name} x {v.name})",
    )


def strassen_power(k: int) -> BilinearConstruction:
    """``k``-fold Strassen composition: a ``(2^k, 2^k, 2^k)`` construction of rank ``7^k``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    cons = naive_construction(1, 1, 1)
    for _ in range(k):
        cons = tensor_compose(cons, strassen_222())
    if k:
        cons = BilinearConstruction(cons.p, cons.m, cons.n, cons.a, cons.b, cons.c, name=f"strassen^{k}")
    return cons


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class ValidationResult:
    """Truthy iff valid. ``counterexample`` is ``(j, k, j', k', l, l')`` for exact mode."""

    ok: bool
    counterexample: tuple | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def brent_tensor(cons: BilinearConstruction, field: PrimeField) -> np.ndarray:
    """``T[j,k,j',k',l,l'] = sum_i a[i,j,k] b[i,j',k'] c[i,l,l'] mod q``."""
    a, b, c = cons.reduced(field)
    R, p, m, n = cons.R, cons.p, cons.m, cons.n
    ab = (a.reshape(R, p * m, 1) * b.reshape(R, 1, p * n)).reshape(R, -1)
    t = ab.T.dot(c.reshape(R, m * n)) % field.q
    return t.reshape(p, m, p, n, m, n)


def validate(
    cons: BilinearConstruction,
    field: PrimeField,
    mode: str = "exact",
    trials: int = 4,
    rng: np.random.Generator | None = None,
) -> ValidationResult:
    """Check that ``cons`` computes ``A^T B``.

    ``exact`` checks every Brent equation. ``randomized`` applies the
    construction to random 1x1-block inputs; a wrong construction survives a
    single trial with probability at most ``pmn/q``.
    """
    if mode == "exact":
        t = brent_tensor(cons, field)
        p, m, n = cons.shape
        for idx in np.ndindex(t.shape):
            j, k, jj, kk, l, ll = idx
            expected = int(j == jj and k == l and kk == ll)
            if t[idx] != expected:
                return ValidationResult(
                    False, idx, f"Brent equation {idx} evaluates to {t[idx]}, expected {expected}"
                )
        return ValidationResult(True)
    if mode == "randomized":
        rng = rng if rng is not None else np.random.default_rng(0)
        p, m, n = cons.shape
        for trial in range(trials):
            A = field.random_matrix(rng, (p, m))
            B = field.random_matrix(rng, (p, n))
            got = apply(field, cons, BlockMatrix(A.reshape(p, m, 1, 1)), BlockMatrix(B.reshape(p, n, 1, 1)))
            if not np.array_equal(got.to_matrix(), field.tmatmul(A, B)):
                return ValidationResult(False, None, f"random trial {trial} disagrees with A^T B")
        return ValidationResult(True)
    raise ValueError(f"unknown validation mode {mode!r}")


def apply(field: PrimeField, cons: BilinearConstruction, A: BlockMatrix, B: BlockMatrix) -> BlockMatrix:
    """Run the bilinear algorithm directly, without coding."""
    if A.grid != (cons.p, cons.m) or B.grid != (cons.p, cons.n):
        raise DimensionMismatch(
            f"grids {A.grid} and {B.grid} do not fit a ({cons.p},{cons.m},{cons.n}) construction"
        )
    if A.block_shape[0] != B.block_shape[0]:
        raise DimensionMismatch("A and B blocks have different row counts")
    a, b, c = cons.reduced(field)
    q = field.q
    a_vec = np.tensordot(a, A.blocks, axes=([1, 2], [0, 1])) % q
    b_vec = np.tensordot(b, B.blocks, axes=([1, 2], [0, 1])) % q
    products = np.stack([field.tmatmul(a_vec[i], b_vec[i]) for i in range(cons.R)])
    return BlockMatrix(np.tensordot(c, products, axes=([0], [0])) % q)


# -- file format ---------------------------------------------------------------


def construction_to_json(cons: BilinearConstruction) -> dict:
    return {
        "name": cons.name,
        "p": cons.p, "m": cons.m, "n": cons.n, "R": cons.R,
        "a": cons.a.tolist(), "b": cons.b.tolist(), "c": cons.c.tolist(),
    }


def dump_construction(cons: BilinearConstruction, path: str | Path) -> None:
    Path(path).write_text(json.dumps(construction_to_json(cons)) + "\n")


def load_construction(path: str | Path, field: PrimeField) -> BilinearConstruction:
    """Read a JSON construction, reduce it mod q and reject it unless it validates exactly."""
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidConstruction(f"{path}: not valid JSON ({exc})") from exc
    return construction_from_json(raw, field, source=str(path))


def construction_from_json(raw: dict, field: PrimeField, source: str = "<json>") -> BilinearConstruction:
    try:
        p, m, n, R = (int(raw[key]) for key in ("p", "m", "n", "R"))
        tensors = [
            np.array(raw[key], dtype=object).reshape(shape) % field.q
            for key, shape in (("a", (R, p, m)), ("b", (R, p, n)), ("c", (R, m, n)))
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidConstruction(f"{source}: malformed construction ({exc})") from exc
    cons = BilinearConstruction(p, m, n, *tensors, name=raw.get("name", Path(source).stem))
    result = validate(cons, field)
    if not result:
        raise InvalidConstruction(f"{source}: {result.detail}")
    return cons
