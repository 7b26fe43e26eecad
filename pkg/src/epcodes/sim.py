"""In-process master/worker simulation in simulated time.

Latencies are drawn from a seeded law. Completion order is the total order
by (latency, worker index), so it never depends on thread scheduling. The
master reads results in that order and stops at the recovery threshold.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .codes.scheme import SchemeDescriptor, SchemeInputs, decode, encode, oracle, random_inputs

LAWS = ("deterministic", "shifted_exponential", "table")
SWEEP_HEADER = ["mode", "p", "m", "n", "R", "T", "L", "M", "N", "threshold", "baseline", "trial",
                "decode_time", "ok", "stragglers"]
DEFAULT_ORACLE_CAP = 1_000_000


@dataclass(frozen=True)
class WorkerModel:
    """Latency law plus forced stragglers.

    Stragglers get latency ``inf`` by default, or their drawn latency times
    ``straggler_factor`` when that is finite.
    """

    law: str = "deterministic"
    t: float = 1.0
    shift: float = 1.0
    rate: float = 1.0
    table: tuple[float, ...] | None = None
    stragglers: tuple[int, ...] = ()
    straggler_factor: float = math.inf
    seed: int = 0

    def __post_init__(self):
        if self.law not in LAWS:
            raise ValueError(f"unknown latency law {self.law!r}; expected one of {LAWS}")
        if self.law == "shifted_exponential" and self.rate <= 0:
            raise ValueError("rate must be positive")
        if self.law == "table" and not self.table:
            raise ValueError("the table law needs per-worker latencies")
        if self.straggler_factor < 1:
            raise ValueError("straggler_factor must be at least 1")

    def latencies(self, N: int) -> list[float]:
        """Per-worker latencies. Draws are by inversion, so a larger N extends the same prefix."""
        if self.law == "deterministic":
            lat = [float(self.t)] * N
        elif self.law == "shifted_exponential":
            u = np.random.default_rng(self.seed).random(N)
            lat = [float(self.shift - math.log1p(-x) / self.rate) for x in u]
        else:
            if len(self.table) < N:
                raise ValueError(f"latency table has {len(self.table)} entries for {N} workers")
            lat = [float(x) for x in self.table[:N]]
        for w in self.stragglers:
            if not 0 <= w < N:
                raise ValueError(f"straggler index {w} outside [0, {N})")
            lat[w] = math.inf if math.isinf(self.straggler_factor) else lat[w] * self.straggler_factor
        return lat

    def to_dict(self) -> dict:
        d = asdict(self)
        d["straggler_factor"] = "inf" if math.isinf(self.straggler_factor) else self.straggler_factor
        return d


@dataclass
class RunReport:
    mode: str
    params: dict
    threshold: int
    baseline: int
    completion: list = dc_field(default_factory=list)
    used_workers: list = dc_field(default_factory=list)
    decode_time: float | None = None
    decoded_ok: bool | None = None
    incomplete: bool = False
    results_read: int = 0
    notes: list = dc_field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.decoded_ok is not None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["decoded_ok"] = "unverified" if self.decoded_ok is None and not self.incomplete else self.decoded_ok
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _threads() -> int:
    raw = os.environ.get("EPC_THREADS", "").strip()
    return max(1, int(raw)) if raw else 1


def _input_size(inputs: SchemeInputs) -> int:
    return sum(x.size for row in inputs.A for x in row) + sum(x.size for row in inputs.B for x in row)


def simulate(
    desc: SchemeDescriptor,
    inputs: SchemeInputs | None = None,
    model: WorkerModel | None = None,
    verify: bool = True,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    execute: bool = True,
) -> RunReport:
    """Encode, draw latencies, decode from the first ``threshold`` arrivals, check against the oracle.

    Never raises on too many stragglers: the report is marked incomplete.
    With ``execute=False`` only the timing is simulated.
    """
    model = model or WorkerModel()
    rng = np.random.default_rng(desc.seed)
    k = desc.threshold
    report = RunReport(desc.label, desc.params(), k, desc.baseline)
    report.params["worker_model"] = model.to_dict()

    lat = model.latencies(desc.N)
    order = sorted(range(desc.N), key=lambda w: (lat[w], w))
    finite = [w for w in order if math.isfinite(lat[w])]
    report.completion = [[w, lat[w]] for w in finite]
    if len(finite) < k:
        report.incomplete = True
        report.decoded_ok = False
        report.notes.append(f"only {len(finite)} workers finish; threshold is {k}")
        return report
    used = finite[:k]
    report.used_workers = used
    report.decode_time = lat[used[-1]]
    if not execute:
        return report

    if inputs is None:
        inputs = random_inputs(desc, rng, D=desc.M - 1)
    job = encode(desc, inputs, rng)
    tasks = {t.worker_id: t for t in job.tasks}
    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(lambda w: tasks[w].compute(), used))
    else:
        values = [tasks[w].compute() for w in used]

    arrivals = list(zip(used, values))
    report.results_read = len(arrivals)
    got = decode(desc, job, arrivals)
    if verify and _input_size(inputs) <= oracle_cap:
        expected = oracle(desc, inputs)
        report.decoded_ok = all(np.array_equal(g, e) for g, e in zip(got, expected))
    else:
        report.notes.append("oracle check skipped")
    return report


def sweep(
    desc: SchemeDescriptor,
    N_values: Iterable[int],
    straggler_counts: Iterable[int] = (0,),
    trials: int = 10,
    model: WorkerModel | None = None,
    seed: int = 0,
    execute: bool = True,
) -> list[dict]:
    """One row per (N, straggler count, trial).

    Trial t uses latency seed ``(seed, t)`` for every N, so rows for different N
    share their first draws; stragglers are a seeded choice of workers.
    Rows with N below the threshold are reported as failures.
    """
    base = model or WorkerModel(law="shifted_exponential")
    rows = []
    for N in N_values:
        for s in straggler_counts:
            for trial in range(trials):
                ss = np.random.SeedSequence([seed, trial])
                lat_seed, pick_seed = (int(x) for x in ss.generate_state(2))
                picks = tuple(sorted(int(w) for w in np.random.default_rng(pick_seed).permutation(N)[:s]))
                m = WorkerModel(base.law, base.t, base.shift, base.rate, base.table, picks,
                                base.straggler_factor, lat_seed)
                row = _row(desc, N, trial, s)
                if N < desc.threshold or s > N:
                    row.update(decode_time=math.inf, ok=False)
                else:
                    d = desc.replace(N=N, seed=lat_seed)
                    rep = simulate(d, model=m, execute=execute)
                    t = rep.decode_time if rep.decode_time is not None else math.inf
                    ok = not rep.incomplete and rep.decoded_ok is not False
                    row.update(decode_time=t, ok=ok)
                rows.append(row)
    return rows


def _row(desc: SchemeDescriptor, N: int, trial: int, stragglers: int) -> dict:
    return {
        "mode": desc.label, "p": desc.p, "m": desc.m, "n": desc.n, "R": desc.R, "T": desc.T,
        "L": desc.L, "M": desc.M, "N": N, "threshold": desc.threshold, "baseline": desc.baseline,
        "trial": trial, "stragglers": stragglers,
    }


def summarize(rows: Sequence[dict]) -> list[dict]:
    """Mean decode time over successful trials and success rate, per (N, stragglers)."""
    groups: dict = {}
    for r in rows:
        groups.setdefault((r["N"], r["stragglers"]), []).append(r)
    out = []
    for (N, s), rs in sorted(groups.items()):
        ok = [r["decode_time"] for r in rs if r["ok"]]
        out.append({
            "N": N, "stragglers": s, "trials": len(rs),
            "success_rate": len(ok) / len(rs),
            "mean_decode_time": sum(ok) / len(ok) if ok else math.inf,
        })
    return out


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_HEADER, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({**r, "decode_time": repr(float(r["decode_time"])), "ok": int(bool(r["ok"]))})
    return buf.getvalue()
