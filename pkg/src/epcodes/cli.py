"""``epc``: threshold tables, scenario runs, verification suites, sweeps, matrix files."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .bilinear import naive_construction, strassen_power
from .codes.thresholds import Mode, baseline_for, strassen_crossover, threshold_for
from .config import load_config, parse_config
from .errors import EPCError
from .field import MERSENNE_61, field_context
from .matrix_io import read_matrix, write_matrix
from .sim import rows_to_csv, simulate, summarize, sweep
from .suites import SCALES, SUITES

THRESHOLD_FIELDS = ["shape", "construction", "R", "mode", "T", "L", "M", "threshold", "baseline", "ratio"]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _table(rows: list[dict], fields: list[str]) -> str:
    widths = {f: max(len(f), *(len(str(r[f])) for r in rows)) for f in fields}
    lines = ["  ".join(f.ljust(widths[f]) for f in fields)]
    lines += ["  ".join(str(r[f]).ljust(widths[f]) for f in fields) for r in rows]
    return "\n".join(lines) + "\n"


# -- thresholds ---------------------------------------------------------------


def threshold_rows(max_k: int = 3, T: int = 2, L: int = 2, M: int = 3) -> list[dict]:
    families = [("naive", naive_construction(2, 2, 2))]
    families += [(f"strassen_pow {k}", strassen_power(k)) for k in range(1, max_k + 1)]
    rows = []
    for name, cons in families:
        p, m, n = cons.shape
        combos = [(Mode.IMPROVED, 0, 1, 1), (Mode.ONE_SIDED_SECURE, T, 1, 1), (Mode.FULLY_SECURE, T, 1, 1),
                  (Mode.PRIVATE, 0, 1, M), (Mode.PRIVATE_SECURE, 0, 1, M), (Mode.FULLY_PRIVATE, 0, 1, M),
                  (Mode.IMPROVED, 0, L, 1), (Mode.FULLY_SECURE, 1, L, 1), (Mode.PRIVATE, 0, L, M),
                  (Mode.PRIVATE_SECURE, 0, L, M), (Mode.FULLY_PRIVATE, 0, L, M)]
        if name == "naive":
            combos.insert(0, (Mode.BASIC, 0, 1, 1))
        for mode, t, ell, lib in combos:
            th = threshold_for(mode, p=p, m=m, n=n, R=cons.R, T=t, L=ell)
            base = baseline_for(mode, p=p, m=m, n=n, T=t, L=ell)
            rows.append({
                "shape": f"({p},{m},{n})", "construction": "-" if mode is Mode.BASIC else name,
                "R": "-" if mode is Mode.BASIC else cons.R,
                "mode": ("batch_" if ell > 1 else "") + mode.value, "T": t, "L": ell, "M": lib,
                "threshold": th, "baseline": base, "ratio": round(th / base, 4),
            })
    return rows


def cmd_thresholds(args) -> int:
    rows = threshold_rows(args.max_k, args.T, args.L, args.M)
    cross = strassen_crossover()
    note = ("gains over the cubic baseline are asymptotic in (p,m,n); "
            "small grids can show ratio > 1")
    if args.format == "json":
        _emit(json.dumps({"rows": rows, "crossover": cross, "note": note}, indent=2) + "\n", args.out)
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=THRESHOLD_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        _emit(buf.getvalue(), args.out)
    else:
        text = _table(rows, THRESHOLD_FIELDS)
        text += (f"\ncrossover: k={cross['k']} is the smallest k with 2*7^k-1 < 8^k+2^k-1 "
                 f"({cross['improved']} < {cross['basic']})\nnote: {note}\n")
        _emit(text, args.out)
    return 0


# -- run / sweep --------------------------------------------------------------


def _load(args):
    if args.example:
        entry = resources.files("epcodes").joinpath("data", f"{args.example}.json")
        cfg = parse_config(entry.read_text())
    else:
        cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    return cfg


def cmd_run(args) -> int:
    cfg = _load(args)
    report = simulate(cfg.descriptor, cfg.build_inputs(), cfg.worker_model)
    _emit(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", args.out)
    return 0 if report.decoded_ok is True else 1


def _int_range(text: str) -> list[int]:
    """``13:20`` (inclusive), ``13,14,16`` or ``14``."""
    if ":" in text:
        lo, hi = (int(x) for x in text.split(":"))
        return list(range(lo, hi + 1))
    return [int(x) for x in text.split(",")]


def cmd_sweep(args) -> int:
    cfg = _load(args)
    seed = cfg.descriptor.seed if args.seed is None else args.seed
    rows = sweep(cfg.descriptor, _int_range(args.N), _int_range(args.stragglers), args.trials,
                 cfg.worker_model, seed=seed, execute=not args.timing_only)
    if args.format == "json":
        _emit(json.dumps({"rows": rows, "summary": summarize(rows)}, indent=2) + "\n", args.out)
    else:
        _emit(rows_to_csv(rows), args.out)
    return 0


# -- verify -------------------------------------------------------------------


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    reports = []
    failed = 0
    for suite in names:
        for name, report in SUITES[suite](args.scale, args.seed):
            status = "PASS" if report.passed else "FAIL"
            failed += not report.passed
            if args.format != "json":
                print(f"{status}  {suite:<13} {report.certificate:<11} {name}")
            reports.append({"suite": suite, "name": name, **report.to_dict()})
    summary = {"scale": args.scale, "suites": names, "reports": len(reports), "failures": failed,
               "passed": failed == 0}
    if args.format == "json":
        print(json.dumps({"summary": summary, "reports": reports}, indent=2, default=str))
    else:
        print(f"{len(reports) - failed}/{len(reports)} checks passed")
    if args.out:
        Path(args.out).write_text(json.dumps({"summary": summary, "reports": reports}, indent=2, default=str) + "\n")
    return 0 if failed == 0 else 1


# -- matrix -------------------------------------------------------------------


def cmd_matrix(args) -> int:
    if args.action == "random":
        field = field_context(args.q)
        mat = field.random_matrix(np.random.default_rng(args.seed), (args.rows, args.cols))
        write_matrix(args.path, mat, args.q, binary=args.binary)
    elif args.action == "convert":
        mat, q = read_matrix(args.path)
        write_matrix(args.dest, mat, q, binary=args.binary)
    else:
        mat, q = read_matrix(args.path)
        print(f"GF({q}) {mat.shape[0]}x{mat.shape[1]}")
        for row in mat:
            print(" ".join(str(v) for v in row))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="epc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("thresholds", help="recovery thresholds against cubic baselines")
    p.add_argument("--max-k", type=int, default=3, help="largest Strassen power in the table")
    p.add_argument("--T", type=int, default=2)
    p.add_argument("--L", type=int, default=2)
    p.add_argument("--M", type=int, default=3)
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_thresholds)

    for name, func, helptext in (("run", cmd_run, "simulate one scenario"),
                                 ("sweep", cmd_sweep, "latency sweep over N and stragglers")):
        p = sub.add_parser(name, help=helptext)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", help="scenario JSON file")
        src.add_argument("--example", help="bundled scenario, e.g. example_improved")
        p.add_argument("--seed", type=int, help="overrides the config seed")
        p.add_argument("--out")
        p.set_defaults(func=func)
    p.add_argument("--N", default="13:20", help="worker counts, e.g. 13:20 or 13,14,16")
    p.add_argument("--stragglers", default="0")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--timing-only", action="store_true", help="skip encoding and decoding")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    p.add_argument("--scale", choices=SCALES, default="tiny")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("matrix", help="matrix file utilities")
    p.add_argument("action", choices=("random", "convert", "show"))
    p.add_argument("path")
    p.add_argument("dest", nargs="?")
    p.add_argument("--q", type=int, default=MERSENNE_61)
    p.add_argument("--rows", type=int, default=4)
    p.add_argument("--cols", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--binary", action="store_true")
    p.set_defaults(func=cmd_matrix)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "matrix" and args.action == "convert" and not args.dest:
        parser.error("convert needs a destination path")
    try:
        return args.func(args)
    except (EPCError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
