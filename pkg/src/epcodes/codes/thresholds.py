"""Modes and the recovery-threshold table.

This is the single place thresholds are computed; everything else asks here.
"""

from __future__ import annotations

from enum import Enum


class Mode(str, Enum):
    BASIC = "basic"
    IMPROVED = "improved"
    ONE_SIDED_SECURE = "one_sided_secure"
    FULLY_SECURE = "fully_secure"
    PRIVATE = "private"
    PRIVATE_SECURE = "private_secure"
    FULLY_PRIVATE = "fully_private"

    @property
    def is_private(self) -> bool:
        return self in (Mode.PRIVATE, Mode.PRIVATE_SECURE, Mode.FULLY_PRIVATE)

    @property
    def is_secure(self) -> bool:
        """Modes whose A-side shares are padded with random keys."""
        return self in (Mode.ONE_SIDED_SECURE, Mode.FULLY_SECURE, Mode.PRIVATE_SECURE)

    @property
    def uses_T(self) -> bool:
        return self in (Mode.ONE_SIDED_SECURE, Mode.FULLY_SECURE)

    @property
    def needs_construction(self) -> bool:
        return self is not Mode.BASIC

    @classmethod
    def parse(cls, text: str) -> tuple["Mode", bool]:
        """Parse ``"fully_secure"``, ``"batch_fully_secure"`` or ``"batch"``.

        Returns the mode and whether a batch prefix was present.
        """
        text = text.strip().lower()
        if text == "batch":
            return cls.IMPROVED, True
        if text.startswith("batch_"):
            return cls(text[len("batch_"):]), True
        return cls(text), False


def encoding_lengths(mode: Mode, K: int, T: int = 0) -> tuple[int, int]:
    """Lengths ``(L_A, L_B)`` of the padded vectors fed to Lagrange encoding.

    ``K`` is the number of element-wise products (``R`` or ``L*R``). For the
    private modes ``L_B`` is the length of the B-side interpolant, which always
    carries one extra node for the hidden constant.
    """
    if mode is Mode.IMPROVED:
        return K, K
    if mode is Mode.ONE_SIDED_SECURE:
        return K + T, K
    if mode is Mode.FULLY_SECURE:
        return K + T, K + T
    if mode is Mode.PRIVATE:
        return K, K + 1
    if mode is Mode.PRIVATE_SECURE:
        return K + 1, K + 1
    if mode is Mode.FULLY_PRIVATE:
        return K + 1, K + 1
    raise ValueError(f"{mode.value} has no Lagrange encoding lengths")


def threshold_for(mode: Mode, *, p: int, m: int, n: int, R: int | None = None, T: int = 0, L: int = 1) -> int:
    """Recovery threshold of ``mode`` under a rank-``R`` construction."""
    if mode is Mode.BASIC:
        if L != 1:
            raise ValueError("the basic code has no batch variant")
        return p * m * n + p - 1
    if R is None:
        raise ValueError(f"{mode.value} needs the construction rank R")
    K = L * R
    if mode is Mode.IMPROVED:
        return 2 * K - 1
    if mode is Mode.ONE_SIDED_SECURE:
        return 2 * K + T - 1
    if mode is Mode.FULLY_SECURE:
        return 2 * K + 2 * T - 1
    if mode is Mode.PRIVATE:
        return 2 * K
    if mode in (Mode.PRIVATE_SECURE, Mode.FULLY_PRIVATE):
        return 2 * K + 1
    raise ValueError(mode)


def baseline_for(mode: Mode, *, p: int, m: int, n: int, T: int = 0, L: int = 1) -> int:
    """Worker count of the cubic (``pmn``-product) state of the art for comparison.

    Single-pair straggler modes compare against the basic entangled code
    (``pmn + p - 1``); batch modes against ``L*pmn``; security adds ``T`` per
    protected side; privacy with security adds one.
    """
    cubic = p * m * n
    if mode in (Mode.BASIC, Mode.IMPROVED):
        return cubic + p - 1 if L == 1 else L * cubic
    base = L * cubic
    if mode is Mode.ONE_SIDED_SECURE:
        return base + T
    if mode is Mode.FULLY_SECURE:
        return base + 2 * T
    if mode is Mode.PRIVATE:
        return base
    return base + 1


def strassen_crossover(max_k: int = 32) -> dict:
    """Smallest ``k`` with ``2*7^k - 1 < 8^k + 2^k - 1``.

    Compares the improved code under ``k``-fold Strassen against the basic
    code on a ``(2^k, 2^k, 2^k)`` grid, in exact integers.
    """
    for k in range(1, max_k + 1):
        improved = 2 * 7**k - 1
        basic = 8**k + 2**k - 1
        if improved < basic:
            return {"k": k, "improved": improved, "basic": basic}
    raise ValueError(f"no crossover up to k={max_k}")
