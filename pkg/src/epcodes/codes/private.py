"""Private and fully private codes: the request index D stays hidden from each worker.

Interpolation uses ``K + 1`` nodes ``x_1..x_{K+1}``. The B-side polynomial
carries the K wanted products at ``x_1..x_K`` and an unspecified constant at
``x_{K+1}``. Dividing it by

    c(x) = prod_{j<=K} (x - x_j) / (x_{K+1} - x_j)

splits it into a sum of per-library "norm" terms plus that constant, which
lets a worker encode from its query alone: the query slot for D carries the
worker's true point, the other slots carry decoy points whose norm terms
add up to the constant. The master undoes the division with ``c(y_i)``
(``c(y_i)^2`` when both sides are built this way).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..bilinear import BilinearConstruction
from ..blocks import BlockMatrix
from ..errors import MTooSmall, PoleAtNode, YTooSmall
from ..field import PrimeField
from .lagrange import combine, lagrange_encode, pre_encode, recover_products
from .thresholds import Mode


@dataclass(frozen=True)
class PrivateQuery:
    """One worker's query ``(q_1, ..., q_M)``; every entry lies in the candidate set."""

    entries: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, j: int) -> int:
        return self.entries[j]


@dataclass(frozen=True)
class PrivateRecord:
    """Master-only knowledge for decoding: D (0-based), worker points, decoys."""

    D: int
    ys: tuple[int, ...]
    zs: tuple[int | None, ...]


def build_queries(D: int, ys: Sequence[int], zs: Sequence[int | None]) -> list[PrivateQuery]:
    """``q_ij = y_i`` for ``j = D`` and ``z_j`` otherwise."""
    return [PrivateQuery(tuple(y if j == D else zs[j] for j in range(len(zs)))) for y in ys]


def private_query_gen(
    D: int, M: int, N: int, y_set: Sequence[int], rng: np.random.Generator
) -> tuple[list[PrivateQuery], PrivateRecord]:
    """Draw N distinct worker points from ``y_set`` and i.i.d. decoys for the other M-1 slots."""
    if not 0 <= D < M:
        raise ValueError(f"request index {D} outside [0, {M})")
    y_set = list(y_set)
    if len(set(y_set)) != len(y_set):
        raise ValueError("candidate set has repeated elements")
    if len(y_set) < N:
        raise YTooSmall(f"candidate set has {len(y_set)} elements, need at least N={N}")
    ys = tuple(y_set[i] for i in rng.choice(len(y_set), size=N, replace=False))
    zs = tuple(None if j == D else y_set[int(rng.integers(len(y_set)))] for j in range(M))
    return build_queries(D, ys, zs), PrivateRecord(D, ys, zs)


def normalization_c(field: PrimeField, xs: Sequence[int], at: int) -> int:
    """``c(at)`` over nodes ``xs = x_1..x_{K+1}``; zero exactly on ``x_1..x_K``."""
    q = field.q
    *data, last = [int(x) % q for x in xs]
    num, den = 1, 1
    for xj in data:
        num = num * (at - xj) % q
        den = den * (last - xj) % q
    return num * field.inv(den) % q


def _norm_constants(field: PrimeField, xs: Sequence[int]) -> list[int]:
    """``prod_{j != i, j <= K} (x_{K+1} - x_j) / (x_i - x_j)`` for each i."""
    q = field.q
    *data, last = [int(x) % q for x in xs]
    nums, dens = [], []
    for i, xi in enumerate(data):
        num, den = 1, 1
        for j, xj in enumerate(data):
            if j != i:
                num = num * (last - xj) % q
                den = den * (xi - xj) % q
        nums.append(num)
        dens.append(den)
    return [n * d % q for n, d in zip(nums, field.batch_inv(dens))]


def norm_basis_eval(
    field: PrimeField, vec: Sequence[np.ndarray], xs: Sequence[int], at: int,
    constants: Sequence[int] | None = None,
) -> np.ndarray:
    """Evaluate ``-sum_i vec_i * const_i * (at - x_{K+1}) / (at - x_i)``.

    Equals the Lagrange interpolant of ``(vec, 0)`` over ``xs`` divided by ``c(at)``.
    """
    q = field.q
    *data, last = [int(x) % q for x in xs]
    if len(data) != len(vec):
        raise ValueError(f"{len(vec)} entries need {len(vec) + 1} nodes, got {len(xs)}")
    at %= q
    if at in data:
        raise PoleAtNode(f"point {at} is a data node; the norm function has a pole there")
    if constants is None:
        constants = _norm_constants(field, xs)
    inv_d = field.batch_inv([(at - xi) % q for xi in data])
    lead = (at - last) % q
    coeffs = [-(k * lead % q) * d % q for k, d in zip(constants, inv_d)]
    return field.linear_combination(coeffs, list(vec))


def query_encode(
    field: PrimeField, library: Sequence[np.ndarray], xs: Sequence[int], query: PrivateQuery
) -> np.ndarray:
    """Worker-side encoding ``sum_j Norm^(j)(q_j)`` over a library of pre-encoded vectors."""
    if len(library) != len(query):
        raise ValueError(f"query has {len(query)} entries for a library of {len(library)}")
    consts = _norm_constants(field, xs)
    terms = [norm_basis_eval(field, vec, xs, qj, consts) for vec, qj in zip(library, query.entries)]
    return sum(terms[1:], terms[0]) % field.q


@dataclass(frozen=True, eq=False)
class PrivateWorker:
    """Everything a worker in the private modes can see.

    There is deliberately no field for D or for the worker's own point.
    """

    worker_id: int
    query: PrivateQuery
    a_tilde: np.ndarray
    b_library: tuple[np.ndarray, ...]
    xs: tuple[int, ...]
    field: PrimeField

    def encode_b(self) -> np.ndarray:
        return query_encode(self.field, self.b_library, self.xs, self.query)

    def compute(self) -> np.ndarray:
        return self.field.tmatmul(self.a_tilde, self.encode_b())


@dataclass(frozen=True, eq=False)
class FullyPrivateWorker:
    """Worker that encodes both sides from its query and the public libraries."""

    worker_id: int
    query: PrivateQuery
    a_library: tuple[np.ndarray, ...]
    b_library: tuple[np.ndarray, ...]
    xs: tuple[int, ...]
    field: PrimeField

    def compute(self) -> np.ndarray:
        a = query_encode(self.field, self.a_library, self.xs, self.query)
        b = query_encode(self.field, self.b_library, self.xs, self.query)
        return self.field.tmatmul(a, b)


def private_encode_a(
    field: PrimeField, a_vec: np.ndarray, xs: Sequence[int], ys: Sequence[int], key: np.ndarray | None = None
) -> list[np.ndarray]:
    """``A~(y_i)``; with ``key`` the vector is padded with it at ``x_{K+1}``."""
    padded = a_vec if key is None else np.concatenate([a_vec, key[None]])
    return lagrange_encode(field, padded, xs, ys)


def private_workers(
    field: PrimeField,
    mode: Mode,
    a_vec: np.ndarray,
    b_library: Sequence[np.ndarray],
    queries: Sequence[PrivateQuery],
    record: PrivateRecord,
    xs: Sequence[int],
    rng: np.random.Generator,
) -> tuple[list[PrivateWorker], np.ndarray | None]:
    """Build the worker contexts for ``private`` / ``private_secure``. Returns ``(workers, key)``."""
    if mode not in (Mode.PRIVATE, Mode.PRIVATE_SECURE):
        raise ValueError(f"{mode.value} is not a private mode")
    key = field.random_matrix(rng, a_vec.shape[1:]) if mode is Mode.PRIVATE_SECURE else None
    a_shares = private_encode_a(field, a_vec, xs, record.ys, key)
    library = tuple(b_library)
    xs = tuple(xs)
    workers = [
        PrivateWorker(i, qi, a, library, xs, field)
        for i, (qi, a) in enumerate(zip(queries, a_shares))
    ]
    return workers, key


def private_encode_and_compute(
    field: PrimeField,
    mode: Mode,
    a_vec: np.ndarray,
    b_library: Sequence[np.ndarray],
    queries: Sequence[PrivateQuery],
    record: PrivateRecord,
    xs: Sequence[int],
    rng: np.random.Generator,
) -> list[np.ndarray]:
    workers, _ = private_workers(field, mode, a_vec, b_library, queries, record, xs, rng)
    return [w.compute() for w in workers]


def private_recover_products(
    field: PrimeField,
    results: Sequence[tuple[int, np.ndarray]],
    record: PrivateRecord,
    xs: Sequence[int],
    needed: int,
    power: int = 1,
) -> list[np.ndarray]:
    """Rescale each ``(worker_id, value)`` by ``c(y_i)^power`` and re-evaluate at ``x_1..x_K``."""
    q = field.q
    K = len(xs) - 1
    scaled = []
    for worker_id, value in results:
        y = record.ys[worker_id]
        scaled.append((y, value * pow(normalization_c(field, xs, y), power, q) % q))
    return recover_products(field, scaled, xs, K, needed)


def check_fully_private(M: int) -> None:
    if M < 2:
        raise MTooSmall("fully private multiplication needs a library of at least two pairs")


def fully_private_workers(
    field: PrimeField,
    a_library: Sequence[np.ndarray],
    b_library: Sequence[np.ndarray],
    queries: Sequence[PrivateQuery],
    xs: Sequence[int],
) -> list[FullyPrivateWorker]:
    check_fully_private(len(a_library))
    a_lib, b_lib, xs = tuple(a_library), tuple(b_library), tuple(xs)
    return [FullyPrivateWorker(i, qi, a_lib, b_lib, xs, field) for i, qi in enumerate(queries)]


def private_decode(
    field: PrimeField,
    results: Sequence[tuple[int, np.ndarray]],
    record: PrivateRecord,
    xs: Sequence[int],
    cons: BilinearConstruction,
    la: int,
    L: int = 1,
) -> list[np.ndarray]:
    """Decode ``A^T B^(D)`` (per batch entry) from ``la + K`` rescaled results."""
    K = len(xs) - 1
    products = private_recover_products(field, results, record, xs, la + K)
    return combine(field, cons, products, L)


def fully_private_decode(
    field: PrimeField,
    results: Sequence[tuple[int, np.ndarray]],
    record: PrivateRecord,
    xs: Sequence[int],
    cons: BilinearConstruction,
    L: int = 1,
) -> list[np.ndarray]:
    K = len(xs) - 1
    products = private_recover_products(field, results, record, xs, 2 * K + 1, power=2)
    return combine(field, cons, products, L)


def fully_private_pipeline(
    field: PrimeField,
    cons: BilinearConstruction,
    a_library: Sequence[BlockMatrix],
    b_library: Sequence[BlockMatrix],
    D: int,
    N: int,
    rng: np.random.Generator,
    y_set: Sequence[int] | None = None,
    subset: Sequence[int] | None = None,
) -> np.ndarray:
    """End to end: pre-encode both libraries, query, compute, decode ``A^(D)T B^(D)``.

    ``subset`` picks which workers' results the master uses (default: all, in order).
    """
    M = len(a_library)
    check_fully_private(M)
    if len(b_library) != M:
        raise ValueError("A and B libraries differ in length")
    K = cons.R
    xs = tuple(range(K + 1))
    if y_set is None:
        y_set = tuple(range(K, min(field.q, K + 2 * N)))
    a_vecs = [pre_encode(field, cons, X, "A") for X in a_library]
    b_vecs = [pre_encode(field, cons, X, "B") for X in b_library]
    queries, record = private_query_gen(D, M, N, y_set, rng)
    workers = fully_private_workers(field, a_vecs, b_vecs, queries, xs)
    chosen = range(N) if subset is None else subset
    results = [(i, workers[i].compute()) for i in chosen]
    return fully_private_decode(field, results, record, xs, cons)[0]
