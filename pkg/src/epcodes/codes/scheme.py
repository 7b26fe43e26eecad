"""One entry point for every code: describe a scheme, encode inputs, decode results.

Inputs are indexed ``[batch entry][library entry]``. Non-private modes use a
library of one; private modes index B's library by the request D; fully
private modes index both sides by D.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ..bilinear import BilinearConstruction, validate
from ..blocks import partition
from ..errors import (
    DimensionMismatch,
    InvalidConstruction,
    MTooSmall,
    SchemeError,
    ShapeMismatch,
    YTooSmall,
)
from ..field import PrimeField, field_context
from .basic import decode_basic, encode_basic
from .lagrange import batch_pre_encode, decode_lagrange, encode_lagrange_shares, pad_with_keys, pre_encode
from .points import (
    CodedShare,
    EvaluationPoints,
    check_field_size,
    default_nodes,
    default_y_set,
    standard_points,
    systematic_points,
)
from .private import (
    FullyPrivateWorker,
    PrivateRecord,
    PrivateWorker,
    fully_private_decode,
    fully_private_workers,
    private_decode,
    private_query_gen,
    private_workers,
)
from .thresholds import Mode, baseline_for, encoding_lengths, threshold_for

WorkerTask = Union[CodedShare, PrivateWorker, FullyPrivateWorker]


@dataclass(frozen=True, eq=False)
class SchemeDescriptor:
    """Parameters of one coded multiplication scheme, validated on construction.

    ``K = L * R`` is the number of element-wise products the Lagrange layer
    carries. For private modes ``points.ys`` is empty: worker points are drawn
    per job from ``y_set``.
    """

    mode: Mode
    p: int
    m: int
    n: int
    N: int
    T: int = 0
    L: int = 1
    M: int = 1
    construction: BilinearConstruction | None = None
    field: PrimeField = dataclasses.field(default_factory=field_context)
    seed: int = 0
    systematic: bool = False
    y_set: tuple[int, ...] | None = None
    points: EvaluationPoints | None = None

    def __post_init__(self):
        mode = Mode(self.mode)
        object.__setattr__(self, "mode", mode)
        if min(self.p, self.m, self.n, self.N, self.L, self.M) < 1 or self.T < 0:
            raise SchemeError("p, m, n, N, L, M must be positive and T non-negative")
        if mode is Mode.BASIC:
            if self.L != 1 or self.T or self.M != 1 or self.systematic:
                raise SchemeError("basic mode takes no batch, keys, library or systematic option")
        else:
            cons = self.construction
            if cons is None:
                raise SchemeError(f"{mode.value} requires a bilinear construction")
            if cons.shape != (self.p, self.m, self.n):
                raise SchemeError(f"construction shape {cons.shape} differs from ({self.p},{self.m},{self.n})")
            result = validate(cons, self.field)
            if not result:
                raise InvalidConstruction(result.detail)
        if self.T and not mode.uses_T:
            raise SchemeError(f"{mode.value} takes no collusion bound T")
        if mode.is_private:
            if mode is Mode.FULLY_PRIVATE and self.M < 2:
                raise MTooSmall("fully private mode needs M >= 2")
        elif self.M != 1:
            raise SchemeError(f"{mode.value} has no library; M must be 1")
        if self.systematic and (mode is not Mode.IMPROVED):
            raise SchemeError("systematic points are only available for the improved (and plain batch) code")
        if self.N < self.threshold:
            raise SchemeError(f"N={self.N} is below the recovery threshold {self.threshold}")

        field = self.field
        check_field_size(field, self.N + (self.K or 0) + self.T + 2)
        if self.points is None:
            object.__setattr__(self, "points", self._default_points())
        if mode.is_private:
            if self.y_set is None:
                object.__setattr__(self, "y_set", default_y_set(field, self.K, self.N))
            y_set = tuple(int(y) for y in self.y_set)
            object.__setattr__(self, "y_set", y_set)
            if len(set(y_set)) < self.N:
                raise YTooSmall(f"candidate set has {len(set(y_set))} distinct elements, need N={self.N}")
            if set(y_set) & set(self.points.xs[: self.K]) or any(not 0 <= y < field.q for y in y_set):
                raise SchemeError("candidate points must be field elements outside x_1..x_K")

    def _default_points(self) -> EvaluationPoints:
        if self.mode is Mode.BASIC:
            return EvaluationPoints((), tuple(range(self.N)))
        if self.mode.is_private:
            return EvaluationPoints(default_nodes(self.K + 1), ())
        if self.systematic:
            return systematic_points(self.field, self.K, self.N, self.mode, self.T)
        return standard_points(self.field, self.K, self.T, self.N)

    @property
    def R(self) -> int | None:
        return None if self.construction is None else self.construction.R

    @property
    def K(self) -> int | None:
        return None if self.construction is None else self.L * self.construction.R

    @property
    def lengths(self) -> tuple[int, int]:
        return encoding_lengths(self.mode, self.K, self.T)

    @property
    def threshold(self) -> int:
        return threshold_for(self.mode, p=self.p, m=self.m, n=self.n, R=self.R, T=self.T, L=self.L)

    @property
    def baseline(self) -> int:
        return baseline_for(self.mode, p=self.p, m=self.m, n=self.n, T=self.T, L=self.L)

    @property
    def label(self) -> str:
        return ("batch_" if self.L > 1 else "") + self.mode.value

    def params(self) -> dict:
        return {
            "mode": self.label, "p": self.p, "m": self.m, "n": self.n, "N": self.N,
            "T": self.T, "L": self.L, "M": self.M, "R": self.R, "q": self.field.q,
            "construction": None if self.construction is None else self.construction.name,
            "systematic": self.systematic, "threshold": self.threshold, "baseline": self.baseline,
            "seed": self.seed,
        }

    def replace(self, **changes) -> "SchemeDescriptor":
        if "N" in changes or "systematic" in changes or "T" in changes:
            changes.setdefault("points", None)
            changes.setdefault("y_set", None)
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True, eq=False)
class SchemeInputs:
    A: tuple[tuple[np.ndarray, ...], ...]
    B: tuple[tuple[np.ndarray, ...], ...]
    D: int | None = None

    @classmethod
    def pair(cls, A: np.ndarray, B: np.ndarray) -> "SchemeInputs":
        return cls(((A,),), ((B,),))

    @classmethod
    def batch(cls, As: Sequence[np.ndarray], Bs: Sequence[np.ndarray]) -> "SchemeInputs":
        return cls(tuple((a,) for a in As), tuple((b,) for b in Bs))

    @classmethod
    def private(cls, A: np.ndarray, Bs: Sequence[np.ndarray], D: int) -> "SchemeInputs":
        return cls(((A,),), (tuple(Bs),), D)

    @classmethod
    def fully_private(cls, As: Sequence[np.ndarray], Bs: Sequence[np.ndarray], D: int) -> "SchemeInputs":
        return cls((tuple(As),), (tuple(Bs),), D)


def random_inputs(
    desc: SchemeDescriptor, rng: np.random.Generator, s: int | None = None, t: int | None = None,
    r: int | None = None, D: int | None = 0,
) -> SchemeInputs:
    """Uniform inputs with A of size ``s x t`` and B of size ``s x r`` (default: 1x1 blocks)."""
    s = s or desc.p
    t = t or desc.m
    r = r or desc.n
    la = desc.M if desc.mode is Mode.FULLY_PRIVATE else 1
    lb = desc.M if desc.mode.is_private else 1
    A = tuple(tuple(desc.field.random_matrix(rng, (s, t)) for _ in range(la)) for _ in range(desc.L))
    B = tuple(tuple(desc.field.random_matrix(rng, (s, r)) for _ in range(lb)) for _ in range(desc.L))
    return SchemeInputs(A, B, D if desc.mode.is_private else None)


def _check_inputs(desc: SchemeDescriptor, inputs: SchemeInputs) -> None:
    la = desc.M if desc.mode is Mode.FULLY_PRIVATE else 1
    lb = desc.M if desc.mode.is_private else 1
    if len(inputs.A) != desc.L or len(inputs.B) != desc.L:
        raise ShapeMismatch(f"expected {desc.L} batch entries")
    if any(len(row) != la for row in inputs.A) or any(len(row) != lb for row in inputs.B):
        raise ShapeMismatch(f"expected libraries of sizes A:{la}, B:{lb}")
    if desc.mode.is_private:
        if inputs.D is None or not 0 <= inputs.D < desc.M:
            raise SchemeError(f"private modes need a request index D in [0, {desc.M})")
    shape_a = inputs.A[0][0].shape
    shape_b = inputs.B[0][0].shape
    if any(x.shape != shape_a for row in inputs.A for x in row) or any(
        x.shape != shape_b for row in inputs.B for x in row
    ):
        raise ShapeMismatch("all A inputs (and all B inputs) must share one shape")
    if shape_a[0] != shape_b[0]:
        raise DimensionMismatch(f"A is {shape_a} and B is {shape_b}; A^T B needs equal row counts")


def oracle(desc: SchemeDescriptor, inputs: SchemeInputs) -> list[np.ndarray]:
    """Direct products: ``A^T B``, ``A^T B^(D)`` or ``A^(D)T B^(D)`` per batch entry."""
    da = inputs.D if desc.mode is Mode.FULLY_PRIVATE else 0
    db = inputs.D if desc.mode.is_private else 0
    return [desc.field.tmatmul(a[da], b[db]) for a, b in zip(inputs.A, inputs.B)]


@dataclass(eq=False)
class Job:
    """An encoded run: one task per worker plus master-side decoding state.

    ``keys`` is exposed for tests only and never reaches a worker as such.
    """

    tasks: list
    ys: tuple[int, ...]
    record: PrivateRecord | None = None
    keys: dict = dataclasses.field(default_factory=dict)

    def compute_all(self) -> list[tuple[int, np.ndarray]]:
        return [(t.worker_id, t.compute()) for t in self.tasks]


def _vectors(desc: SchemeDescriptor, blocks_of, side: str, j: int) -> np.ndarray:
    return np.concatenate([pre_encode(desc.field, desc.construction, blocks_of(ell, j), side) for ell in range(desc.L)])


def encode(desc: SchemeDescriptor, inputs: SchemeInputs, rng: np.random.Generator | None = None) -> Job:
    _check_inputs(desc, inputs)
    rng = rng if rng is not None else np.random.default_rng(desc.seed)
    field, mode = desc.field, desc.mode

    def a_blocks(ell, j):
        return partition(inputs.A[ell][j], desc.p, desc.m)

    def b_blocks(ell, j):
        return partition(inputs.B[ell][j], desc.p, desc.n)

    if mode is Mode.BASIC:
        shares = encode_basic(field, a_blocks(0, 0), b_blocks(0, 0), desc.points.ys)
        return Job(shares, desc.points.ys)

    K = desc.K
    if not mode.is_private:
        a_vec, b_vec = batch_pre_encode(
            field, desc.construction, [(a_blocks(ell, 0), b_blocks(ell, 0)) for ell in range(desc.L)]
        )
        key_a = desc.T if mode in (Mode.ONE_SIDED_SECURE, Mode.FULLY_SECURE) else 0
        key_b = desc.T if mode is Mode.FULLY_SECURE else 0
        a_pad, za = pad_with_keys(field, a_vec, key_a, rng)
        b_pad, zb = pad_with_keys(field, b_vec, key_b, rng)
        shares = encode_lagrange_shares(field, a_pad, b_pad, desc.points, K, systematic=desc.systematic)
        return Job(shares, desc.points.ys, keys={"A": za, "B": zb})

    xs = desc.points.xs
    b_library = [_vectors(desc, b_blocks, "B", j) for j in range(desc.M)]
    if mode is Mode.FULLY_PRIVATE:
        a_library = [_vectors(desc, a_blocks, "A", j) for j in range(desc.M)]
        queries, record = private_query_gen(inputs.D, desc.M, desc.N, desc.y_set, rng)
        workers = fully_private_workers(field, a_library, b_library, queries, xs)
        return Job(workers, record.ys, record)

    a_vec = _vectors(desc, a_blocks, "A", 0)
    queries, record = private_query_gen(inputs.D, desc.M, desc.N, desc.y_set, rng)
    workers, key = private_workers(field, mode, a_vec, b_library, queries, record, xs, rng)
    keys = {} if key is None else {"A": key[None]}
    return Job(workers, record.ys, record, keys)


def decode(desc: SchemeDescriptor, job: Job, results: Sequence[tuple[int, np.ndarray]]) -> list[np.ndarray]:
    """Decode from ``(worker_id, value)`` pairs in arrival order; extras past the threshold are ignored."""
    field, mode = desc.field, desc.mode
    if mode is Mode.BASIC:
        pairs = [(job.ys[w], v) for w, v in results]
        return [decode_basic(field, pairs, desc.p, desc.m, desc.n)]
    la, lb = desc.lengths
    if not mode.is_private:
        pairs = [(job.ys[w], v) for w, v in results]
        return decode_lagrange(field, pairs, desc.points.xs, desc.construction, la, lb, desc.L)
    if mode is Mode.FULLY_PRIVATE:
        return fully_private_decode(field, results, job.record, desc.points.xs, desc.construction, desc.L)
    return private_decode(field, results, job.record, desc.points.xs, desc.construction, la, desc.L)


def make_descriptor(
    mode: str | Mode,
    *,
    N: int,
    construction: BilinearConstruction | None = None,
    p: int | None = None,
    m: int | None = None,
    n: int | None = None,
    **kwargs,
) -> SchemeDescriptor:
    """Build a descriptor, taking ``p, m, n`` from the construction when omitted.

    ``mode`` may carry a ``batch_`` prefix, in which case ``L`` must be given.
    """
    if isinstance(mode, str) and not isinstance(mode, Mode):
        mode, batch = Mode.parse(mode)
        if batch and kwargs.get("L", 1) < 1:
            raise SchemeError("batch modes need L >= 1")
    if construction is not None:
        p = p or construction.p
        m = m or construction.m
        n = n or construction.n
    if None in (p, m, n):
        raise SchemeError("p, m, n are required without a construction")
    return SchemeDescriptor(Mode(mode), p, m, n, N, construction=construction, **kwargs)
