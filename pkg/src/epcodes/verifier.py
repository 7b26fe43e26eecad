"""Computational certificates for recovery thresholds, secrecy and privacy.

Three kinds of certificate:

* ``decode`` -- decode from every (or a seeded sample of) threshold-size
  subset and compare against the direct product.
* ``rank`` -- the colluders' key-coefficient matrix is invertible, so with
  uniform keys their shares are uniform whatever the data.
* ``enumeration`` -- exhaustive enumeration over inputs, keys and the
  master's randomness; statements are checked as exact distribution
  equalities, never as floating-point entropies.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .blocks import BlockMatrix
from .codes.lagrange import lagrange_encode, pre_encode
from .codes.private import build_queries, private_encode_a
from .codes.scheme import Job, SchemeDescriptor, SchemeInputs, decode, encode, oracle, random_inputs
from .codes.thresholds import Mode
from .errors import NotEnoughResults, NotSecureMode, StateSpaceTooLarge
from .field import PrimeField, lagrange_weights, matrix_rank

DEFAULT_STATE_CAP = 10**7


@dataclass
class AuditReport:
    mode: str
    params: dict
    certificate: str
    subsets_tested: int = 0
    failures: list = dc_field(default_factory=list)
    seed: int | None = None
    notes: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, default=str)


# -- thresholds ---------------------------------------------------------------


def _subsets(N: int, k: int, cap: int, samples: int, rng: np.random.Generator):
    total = math.comb(N, k)
    if total <= cap:
        yield from itertools.combinations(range(N), k)
        return
    seen = set()
    while len(seen) < min(samples, total):
        pick = tuple(sorted(int(i) for i in rng.choice(N, size=k, replace=False)))
        if pick not in seen:
            seen.add(pick)
            yield pick


def threshold_audit(
    desc: SchemeDescriptor,
    inputs: SchemeInputs | None = None,
    exhaustive_cap: int = 10_000,
    samples: int = 200,
    seed: int | None = None,
    job: Job | None = None,
) -> AuditReport:
    """Decode from threshold-size subsets and check the under-threshold failure.

    Subsets are exhaustive when there are at most ``exhaustive_cap`` of them,
    otherwise ``samples`` distinct subsets are drawn with ``seed``. Each
    subset is fed to the decoder in a shuffled arrival order.
    """
    seed = desc.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    if inputs is None:
        inputs = random_inputs(desc, rng, 2 * desc.p, 2 * desc.m, 2 * desc.n, D=desc.M - 1)
    if job is None:
        job = encode(desc, inputs, rng)
    expected = oracle(desc, inputs)
    results = dict(job.compute_all())
    k = desc.threshold
    report = AuditReport(desc.label, desc.params(), "decode", seed=seed)

    for subset in _subsets(desc.N, k, exhaustive_cap, samples, rng):
        order = list(subset)
        rng.shuffle(order)
        try:
            got = decode(desc, job, [(w, results[w]) for w in order])
        except Exception as exc:  # recorded, not raised
            report.failures.append({"subset": list(subset), "error": repr(exc)})
        else:
            if not all(np.array_equal(g, e) for g, e in zip(got, expected)):
                report.failures.append({"subset": list(subset), "error": "decoded product differs from oracle"})
        report.subsets_tested += 1

    short = list(range(1, k)) if desc.N >= k else list(range(k - 1))
    try:
        decode(desc, job, [(w, results[w]) for w in short])
    except NotEnoughResults:
        report.notes.append(f"{k - 1} results correctly rejected")
    else:
        report.failures.append({"subset": short, "error": "decoded from threshold-1 results"})
    return report


# -- secrecy ------------------------------------------------------------------


def _key_layout(desc: SchemeDescriptor, side: str) -> tuple[list[int], int]:
    """Return (nodes, number of keys) for the padded side that ``side`` names."""
    mode, K = desc.mode, desc.K
    xs = list(desc.points.xs)
    if mode is Mode.ONE_SIDED_SECURE and side == "A" and desc.T:
        return xs[: K + desc.T], desc.T
    if mode is Mode.FULLY_SECURE and side in ("A", "B") and desc.T:
        return xs[: K + desc.T], desc.T
    if mode is Mode.PRIVATE_SECURE and side == "A":
        return xs[: K + 1], 1
    raise NotSecureMode(f"{desc.label} with T={desc.T} claims no secrecy for side {side}")


def key_coefficient_matrix(field: PrimeField, nodes: Sequence[int], n_keys: int, ys: Sequence[int]) -> list[list[int]]:
    """``G[w][t] = l_{K+t}(y_w)``: how key t enters colluder w's share."""
    K = len(nodes) - n_keys
    return [lagrange_weights(field, nodes, y)[K:] for y in ys]


def secrecy_rank_certificate(
    desc: SchemeDescriptor, side: str = "A", ys: Sequence[int] | None = None
) -> AuditReport:
    """Check that every T colluders' key-coefficient matrix is invertible.

    ``side`` is ``"A"``, ``"B"`` or ``"both"``. ``ys`` overrides the worker
    points (private modes default to the whole candidate set, since any of
    it may be drawn).
    """
    sides = ("A", "B") if side == "both" else (side,)
    if ys is None:
        ys = desc.y_set if desc.mode.is_private else desc.points.ys
    ys = list(ys)
    report = AuditReport(desc.label, desc.params(), "rank", seed=desc.seed)
    report.notes.append(
        "invertible key-coefficient matrices make any T colluders' shares uniform "
        "and independent of the data when keys are uniform"
    )
    for s in sides:
        nodes, n_keys = _key_layout(desc, s)
        for subset in itertools.combinations(range(len(ys)), n_keys):
            G = key_coefficient_matrix(desc.field, nodes, n_keys, [ys[w] for w in subset])
            report.subsets_tested += 1
            if matrix_rank(desc.field, G) < n_keys:
                report.failures.append({"side": s, "colluders": list(subset), "G": G})
    return report


@dataclass(frozen=True)
class MutualInformation:
    """Exact zero test plus the (float) value in bits for reporting."""

    is_zero: bool
    bits: float
    states: int


def mutual_information_from_counts(joint: Counter) -> MutualInformation:
    """``joint`` maps ``(secret, observation)`` to a count of equally likely states."""
    total = sum(joint.values())
    by_secret: dict = {}
    p_obs: Counter = Counter()
    p_sec: Counter = Counter()
    for (s, o), c in joint.items():
        by_secret.setdefault(s, Counter())[o] += c
        p_obs[o] += c
        p_sec[s] += c
    # I = 0 iff every conditional P(obs | secret) is the same; compare by
    # cross-multiplying counts so the test stays in exact integers.
    items = list(by_secret.items())
    s0, first = items[0]
    is_zero = all(
        set(cnt) == set(first) and all(c * p_sec[s0] == first[o] * p_sec[s] for o, c in cnt.items())
        for s, cnt in items[1:]
    )
    bits = 0.0
    for (s, o), c in joint.items():
        bits += c / total * math.log2(c * total / (p_sec[s] * p_obs[o]))
    return MutualInformation(is_zero, 0.0 if is_zero else bits, total)


@dataclass(frozen=True)
class TinyScheme:
    """The parts of a Lagrange code that one observer's shares depend on.

    Used for exhaustive enumeration, where the field is too small for a full
    scheme with N at or above the threshold. ``ys`` are only the observed
    workers' points.
    """

    mode: Mode
    construction: object
    field: PrimeField
    T: int
    ys: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.mode not in (Mode.IMPROVED, Mode.ONE_SIDED_SECURE, Mode.FULLY_SECURE):
            raise NotSecureMode("exact enumeration covers the straggler and secure Lagrange codes")
        if self.T and not self.mode.uses_T:
            raise ValueError(f"{self.mode.value} takes no collusion bound")
        clash = set(self.ys) & set(self.xs)
        if clash or len(set(self.ys)) != len(self.ys) or max(self.ys) >= self.field.q:
            raise ValueError(f"worker points {self.ys} must be distinct field elements off the nodes {self.xs}")

    @property
    def xs(self) -> tuple[int, ...]:
        return tuple(range(self.construction.R + self.T))

    @classmethod
    def from_descriptor(cls, desc: SchemeDescriptor, observed: Sequence[int]) -> "TinyScheme":
        if desc.L != 1:
            raise NotSecureMode("exact enumeration is for single-pair schemes")
        return cls(desc.mode, desc.construction, desc.field, desc.T, tuple(desc.points.ys[w] for w in observed))


def exact_mutual_information(
    scheme: TinyScheme,
    secret: str | None = None,
    cap: int = DEFAULT_STATE_CAP,
) -> MutualInformation:
    """Exact I(observed shares; secret) by enumerating every input and key.

    Uses 1x1 blocks, i.e. A is ``p x m`` and B is ``p x n``. ``secret`` is
    ``"A"`` (observe A-shares) or ``"AB"`` (observe both shares); the default
    follows the mode's claim.
    """
    mode, field, cons, T = scheme.mode, scheme.field, scheme.construction, scheme.T
    if secret is None:
        secret = "AB" if mode is Mode.FULLY_SECURE else "A"
    q, p, m, n = field.q, cons.p, cons.m, cons.n
    keys_a = T if mode in (Mode.ONE_SIDED_SECURE, Mode.FULLY_SECURE) else 0
    keys_b = T if mode is Mode.FULLY_SECURE else 0
    n_vars = p * m + p * n + keys_a + keys_b
    if q**n_vars > cap:
        raise StateSpaceTooLarge(f"{q}^{n_vars} states exceed the cap of {cap}")
    xs, ys = scheme.xs, scheme.ys

    joint: Counter = Counter()
    for state in itertools.product(range(q), repeat=n_vars):
        it = iter(state)
        A = np.array([next(it) for _ in range(p * m)], dtype=object).reshape(p, m, 1, 1)
        B = np.array([next(it) for _ in range(p * n)], dtype=object).reshape(p, n, 1, 1)
        za = np.array([next(it) for _ in range(keys_a)], dtype=object).reshape(keys_a, 1, 1)
        zb = np.array([next(it) for _ in range(keys_b)], dtype=object).reshape(keys_b, 1, 1)
        a_vec = np.concatenate([pre_encode(field, cons, BlockMatrix(A), "A"), za])
        b_vec = np.concatenate([pre_encode(field, cons, BlockMatrix(B), "B"), zb])
        obs = tuple(int(s[0, 0]) for s in lagrange_encode(field, a_vec, xs, ys))
        if secret == "AB":
            obs += tuple(int(s[0, 0]) for s in lagrange_encode(field, b_vec, xs, ys))
            sec = state[: p * m + p * n]
        else:
            sec = state[: p * m]
        joint[(sec, obs)] += 1
    return mutual_information_from_counts(joint)


# -- privacy ------------------------------------------------------------------

PRIVACY_VARIANTS = ("honest", "reuse_y1", "constant_z")


def _decoys(variant: str, zs: tuple, ys: tuple, y_set: Sequence[int], D: int) -> tuple:
    if variant == "honest":
        return tuple(None if j == D else z for j, z in enumerate(zs))
    if variant == "reuse_y1":
        return tuple(None if j == D else ys[0] for j in range(len(zs)))
    if variant == "constant_z":
        return tuple(None if j == D else y_set[0] for j in range(len(zs)))
    raise ValueError(f"unknown variant {variant!r}")


def privacy_distribution_check(
    M: int,
    N: int,
    y_set: Sequence[int],
    mode: Mode | str = Mode.PRIVATE,
    variant: str = "honest",
    desc: SchemeDescriptor | None = None,
    cap: int = DEFAULT_STATE_CAP,
) -> AuditReport:
    """Exact per-worker view distributions for every request index D.

    Enumerates the master's randomness: the ordered N distinct worker points
    and the M-1 decoys. The check passes iff, for every worker, the view
    distribution is the same for all D and the query itself is uniform over
    ``y_set^M``.

    With ``desc`` given (private or private_secure, 1x1 blocks) the view also
    includes the worker's A-share, enumerating A and the key uniformly.
    """
    mode = Mode(mode)
    y_set = list(y_set)
    params = {"M": M, "N": N, "y_set": y_set, "variant": variant}
    report = AuditReport(mode.value, params, "enumeration")
    report.notes.append(
        "A-shares and the libraries do not depend on D, so equal query "
        "distributions across D certify the privacy condition for this construction"
    )

    share_space: list = [None]
    if desc is not None:
        if desc.mode not in (Mode.PRIVATE, Mode.PRIVATE_SECURE):
            raise ValueError("share-inclusive checks apply to private and private_secure")
        q, pm = desc.field.q, desc.p * desc.m
        n_keys = 1 if desc.mode is Mode.PRIVATE_SECURE else 0
        share_space = list(itertools.product(range(q), repeat=pm + n_keys))
    n_states = math.perm(len(y_set), N) * len(y_set) ** (M - 1) * len(share_space)
    if n_states * M > cap:
        raise StateSpaceTooLarge(f"{n_states * M} states exceed the cap of {cap}")

    def a_share(values, y):
        A = np.array(values[:pm], dtype=object).reshape(desc.p, desc.m, 1, 1)
        a_vec = pre_encode(desc.field, desc.construction, BlockMatrix(A), "A")
        key = np.array(values[pm:], dtype=object).reshape(1, 1) if n_keys else None
        return int(private_encode_a(desc.field, a_vec, desc.points.xs, [y], key)[0][0, 0])

    dists = {i: [] for i in range(N)}
    for D in range(M):
        counters = [Counter() for _ in range(N)]
        for ys in itertools.permutations(y_set, N):
            for z_rest in itertools.product(y_set, repeat=M - 1):
                zs = tuple(z_rest[:D]) + (None,) + tuple(z_rest[D:])
                queries = build_queries(D, ys, _decoys(variant, zs, ys, y_set, D))
                for i, qi in enumerate(queries):
                    for values in share_space:
                        view = qi.entries if values is None else (qi.entries, a_share(values, ys[i]))
                        counters[i][view] += 1
        for i in range(N):
            dists[i].append(counters[i])
        report.subsets_tested += 1

    uniform_count = None
    for i in range(N):
        base = dists[i][0]
        for D in range(1, M):
            if dists[i][D] != base:
                report.failures.append({"worker": i, "D": D, "error": "view distribution differs from D=0"})
        q_marg = Counter()
        for view, c in base.items():
            q_marg[view if desc is None else view[0]] += c
        if len(q_marg) != len(y_set) ** M or len(set(q_marg.values())) != 1:
            report.failures.append({"worker": i, "error": "query is not uniform over the candidate set"})
        uniform_count = next(iter(q_marg.values()))
    report.notes.append(f"each query tuple has weight {uniform_count} per D")
    return report
