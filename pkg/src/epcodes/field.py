"""Exact arithmetic over GF(q) for prime q.

Field elements are plain Python ints in ``[0, q)``; matrices are numpy arrays
with ``dtype=object`` holding such ints, so products never overflow no matter
how large q is. Every function here is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, TypeVar

import numpy as np
from sympy import isprime

from .errors import DuplicateNode, NonPrimeModulus

MERSENNE_61 = (1 << 61) - 1

V = TypeVar("V")


class PrimeField:
    """GF(q) context: scalar ops plus the handful of matrix helpers the codes need."""

    __slots__ = ("q",)

    def __init__(self, q: int):
        q = int(q)
        if q < 2 or not isprime(q):
            raise NonPrimeModulus(f"modulus {q} is not prime")
        self.q = q

    def __repr__(self) -> str:
        return f"PrimeField({self.q})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("PrimeField", self.q))

    # -- scalars ---------------------------------------------------------

    def __call__(self, value: int) -> int:
        return int(value) % self.q

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def neg(self, a: int) -> int:
        return -a % self.q

    def mul(self, a: int, b: int) -> int:
        return a * b % self.q

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.q})")
        return pow(a, -1, self.q)

    def div(self, a: int, b: int) -> int:
        return a * self.inv(b) % self.q

    def pow(self, a: int, e: int) -> int:
        return pow(a % self.q, e, self.q)

    def batch_inv(self, values: Sequence[int]) -> list[int]:
        """Invert many nonzero elements with a single modular inversion."""
        q = self.q
        prefix = [1] * (len(values) + 1)
        for i, v in enumerate(values):
            if v % q == 0:
                raise ZeroDivisionError(f"0 has no inverse in GF({q})")
            prefix[i + 1] = prefix[i] * v % q
        acc = pow(prefix[-1], -1, q)
        out = [0] * len(values)
        for i in range(len(values) - 1, -1, -1):
            out[i] = acc * prefix[i] % q
            acc = acc * values[i] % q
        return out

    def random_element(self, rng: np.random.Generator) -> int:
        return int(rng.integers(0, self.q, dtype=np.uint64))

    # -- matrices --------------------------------------------------------

    def matrix(self, data) -> np.ndarray:
        """Coerce nested ints (possibly negative) into a reduced object array."""
        arr = np.array(data, dtype=object)
        if arr.ndim == 0:
            raise ValueError("expected an array, got a scalar")
        return arr % self.q

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=object)

    def identity(self, size: int) -> np.ndarray:
        return np.eye(size, dtype=int).astype(object)

    def random_matrix(self, rng: np.random.Generator, shape) -> np.ndarray:
        draws = rng.integers(0, self.q, size=shape, dtype=np.uint64)
        return np.vectorize(int, otypes=[object])(draws) if draws.size else draws.astype(object)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return a.dot(b) % self.q

    def tmatmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """``a^T b``, the product every worker computes."""
        return a.T.dot(b) % self.q

    def scale(self, c: int, a: np.ndarray) -> np.ndarray:
        return a * c % self.q

    def linear_combination(self, coeffs: Sequence[int], items: Sequence[np.ndarray]) -> np.ndarray:
        if len(coeffs) != len(items):
            raise ValueError("coefficient and item counts differ")
        if not items:
            raise ValueError("empty linear combination")
        acc = items[0] * coeffs[0]
        for c, x in zip(coeffs[1:], items[1:]):
            if c:
                acc = acc + x * c
        return acc % self.q


@lru_cache(maxsize=None)
def field_context(q: int = MERSENNE_61) -> PrimeField:
    """Cached :class:`PrimeField` constructor."""
    return PrimeField(q)


# -- polynomials -------------------------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial over GF(q), lowest-degree coefficient first.

    Trailing zeros are stripped on construction; the zero polynomial has no
    coefficients and degree -1.
    """

    coeffs: tuple[int, ...]
    field: PrimeField

    def __init__(self, coeffs: Sequence[int], field: PrimeField):
        reduced = [int(c) % field.q for c in coeffs]
        while reduced and reduced[-1] == 0:
            reduced.pop()
        object.__setattr__(self, "coeffs", tuple(reduced))
        object.__setattr__(self, "field", field)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, at: int) -> int:
        return eval_poly(self.field, self.coeffs, at)

    @classmethod
    def interpolate(cls, field: PrimeField, xs: Sequence[int], ys: Sequence[int]) -> "Polynomial":
        return cls(lagrange_interpolate(field, xs, ys), field)

    @classmethod
    def random(cls, field: PrimeField, degree: int, rng: np.random.Generator) -> "Polynomial":
        return cls([field.random_element(rng) for _ in range(degree + 1)], field)


def eval_poly(field: PrimeField, coeffs: Sequence, at: int):
    """Horner evaluation. Coefficients may be scalars or object matrices."""
    q = field.q
    if not len(coeffs):
        return 0
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = (acc * at + c) % q
    return acc % q


def _check_distinct(xs: Sequence[int], q: int) -> list[int]:
    xs = [int(x) % q for x in xs]
    if len(set(xs)) != len(xs):
        raise DuplicateNode(f"interpolation nodes are not distinct: {xs}")
    return xs


def barycentric_weights(field: PrimeField, xs: Sequence[int]) -> list[int]:
    """``w_j = 1 / prod_{k != j} (x_j - x_k)``."""
    q = field.q
    xs = _check_distinct(xs, q)
    dens = []
    for j, xj in enumerate(xs):
        d = 1
        for k, xk in enumerate(xs):
            if k != j:
                d = d * (xj - xk) % q
        dens.append(d)
    return field.batch_inv(dens)


def lagrange_coefficient(field: PrimeField, xs: Sequence[int], j: int, at: int) -> int:
    """Value at ``at`` of the j-th Lagrange basis polynomial over nodes ``xs``."""
    q = field.q
    xs = _check_distinct(xs, q)
    at %= q
    num, den = 1, 1
    for k, xk in enumerate(xs):
        if k != j:
            num = num * (at - xk) % q
            den = den * (xs[j] - xk) % q
    return num * pow(den, -1, q) % q


def lagrange_weights(
    field: PrimeField, xs: Sequence[int], at: int, weights: Sequence[int] | None = None
) -> list[int]:
    """All basis values ``[l_1(at), ..., l_K(at)]`` in O(K) after the weights.

    ``weights`` may carry precomputed :func:`barycentric_weights` for ``xs``.
    """
    q = field.q
    xs = [int(x) % q for x in xs]
    at %= q
    if at in xs:
        return [1 if x == at else 0 for x in xs]
    if weights is None:
        weights = barycentric_weights(field, xs)
    diffs = [(at - x) % q for x in xs]
    full = 1
    for d in diffs:
        full = full * d % q
    inv_diffs = field.batch_inv(diffs)
    return [full * w % q * idf % q for w, idf in zip(weights, inv_diffs)]


def lagrange_evaluate(field: PrimeField, xs: Sequence[int], values: Sequence[V], at: int) -> V:
    """Evaluate the interpolant through ``(xs, values)`` at one point."""
    weights = lagrange_weights(field, xs, at)
    if isinstance(values[0], np.ndarray):
        return field.linear_combination(weights, values)
    return sum(w * v for w, v in zip(weights, values)) % field.q


def lagrange_interpolate(field: PrimeField, xs: Sequence[int], values: Sequence[V]) -> list[V]:
    """Coefficients (lowest first, length K) of the unique degree < K interpolant.

    ``values`` may be scalars or equally-shaped object matrices; matrices are
    interpolated entrywise with the node-dependent scalars shared.
    """
    q = field.q
    xs = _check_distinct(xs, q)
    if len(values) != len(xs):
        raise ValueError("node and value counts differ")
    k = len(xs)
    weights = barycentric_weights(field, xs)

    # master(x) = prod (x - x_j), lowest degree first
    master = [1]
    for xj in xs:
        nxt = [0] * (len(master) + 1)
        for d, c in enumerate(master):
            nxt[d + 1] = (nxt[d + 1] + c) % q
            nxt[d] = (nxt[d] - c * xj) % q
        master = nxt

    is_matrix = isinstance(values[0], np.ndarray)
    out = [field.zeros(values[0].shape) if is_matrix else 0 for _ in range(k)]
    for j, xj in enumerate(xs):
        # synthetic division master(x) / (x - x_j)
        basis = [0] * k
        carry = 0
        for d in range(k, 0, -1):
            carry = (master[d] + carry * xj) % q
            basis[d - 1] = carry
        scale = weights[j]
        vj = values[j]
        for d in range(k):
            c = basis[d] * scale % q
            if c:
                out[d] = out[d] + vj * c
    return [o % q for o in out]


def matrix_rank(field: PrimeField, rows: Sequence[Sequence[int]]) -> int:
    """Rank over GF(q) by Gaussian elimination."""
    q = field.q
    work = [[int(v) % q for v in row] for row in rows]
    rank = 0
    ncols = len(work[0]) if work else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(work)) if work[r][col]), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = pow(work[rank][col], -1, q)
        work[rank] = [v * inv % q for v in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col]:
                f = work[r][col]
                work[r] = [(a - f * b) % q for a, b in zip(work[r], work[rank])]
        rank += 1
    return rank
