"""Evaluation points and the per-worker share record."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import (
    DuplicatePoint,
    InsufficientFieldSize,
    ModeForbidsSystematic,
    NotEnoughResults,
    PointCollision,
)
from ..field import PrimeField
from .thresholds import Mode


@dataclass(frozen=True)
class EvaluationPoints:
    """Interpolation nodes ``xs`` and worker points ``ys`` (the latter empty for private modes)."""

    xs: tuple[int, ...]
    ys: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.xs)) != len(self.xs):
            raise DuplicatePoint(f"interpolation nodes repeat: {self.xs}")
        if len(set(self.ys)) != len(self.ys):
            raise DuplicatePoint(f"worker points repeat: {self.ys}")

    def check_disjoint(self, n_data: int) -> None:
        clash = set(self.ys) & set(self.xs[:n_data])
        if clash:
            raise PointCollision(f"worker points {sorted(clash)} coincide with data nodes")


@dataclass(frozen=True, eq=False)
class CodedShare:
    """What one worker stores: a coded block of A and one of B.

    ``y`` is master-side bookkeeping; the worker only multiplies.
    """

    worker_id: int
    a_tilde: np.ndarray
    b_tilde: np.ndarray
    y: int
    field: PrimeField

    def compute(self) -> np.ndarray:
        return self.field.tmatmul(self.a_tilde, self.b_tilde)


def check_field_size(field: PrimeField, needed: int) -> None:
    if field.q < needed:
        raise InsufficientFieldSize(f"GF({field.q}) has fewer than the {needed} distinct points required")


def default_nodes(count: int) -> tuple[int, ...]:
    """``x_j = j - 1``."""
    return tuple(range(count))


def default_worker_points(n_nodes: int, N: int) -> tuple[int, ...]:
    """``y_i = n_nodes + i - 1``, i.e. the first N field elements past the key nodes."""
    return tuple(range(n_nodes, n_nodes + N))


def standard_points(field: PrimeField, K: int, T: int, N: int) -> EvaluationPoints:
    """Deterministic points for the straggler and secure Lagrange codes."""
    check_field_size(field, N + K + T + 2)
    return EvaluationPoints(default_nodes(K + T + 1), default_worker_points(K + T, N))


def systematic_points(field: PrimeField, R: int, N: int, mode: Mode = Mode.IMPROVED, T: int = 0) -> EvaluationPoints:
    """Points with ``y_i = x_i`` for the first ``R`` workers.

    Those workers receive the uncoded pre-encoded blocks and return the
    element-wise products themselves. Only valid without keys or queries.
    """
    if mode is not Mode.IMPROVED or T:
        raise ModeForbidsSystematic(f"{mode.value} requires worker points disjoint from the data nodes")
    if N < R:
        raise ModeForbidsSystematic(f"N={N} is smaller than the {R} systematic workers")
    check_field_size(field, N + R + 2)
    return EvaluationPoints(default_nodes(R + 1), tuple(range(N)))


def default_y_set(field: PrimeField, K: int, N: int) -> tuple[int, ...]:
    """Contiguous candidate set for private-mode worker points, just past ``x_1..x_K``."""
    stop = min(field.q, K + 2 * N)
    return tuple(range(K, stop))


def first_by_arrival(results: Sequence, needed: int) -> list:
    results = list(results)
    if len(results) < needed:
        raise NotEnoughResults(needed, len(results))
    return results[:needed]
