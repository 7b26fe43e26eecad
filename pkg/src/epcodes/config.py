"""Scenario configs: JSON files describing one scheme, its inputs and a worker model.

Example::

    {
      "mode": "improved",
      "construction": "strassen",
      "N": 14,
      "seed": 7,
      "inputs": {"random": {"s": 4, "t": 4, "r": 4}},
      "worker_model": {"law": "deterministic", "t": 1.0, "stragglers": [3]}
    }

Construction specs: ``"naive"``, ``"strassen"``, ``"strassen_pow k"``,
``{"naive": [p, m, n]}``, ``{"strassen_pow": k}``, ``{"compose": [spec, ...]}``
or ``{"file": "path.json"}``. Relative paths resolve against the config's
directory. Errors carry the line of the offending key where one exists.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from functools import reduce
from pathlib import Path
from typing import Any

import numpy as np

from .bilinear import BilinearConstruction, load_construction, naive_construction, strassen_222, strassen_power, tensor_compose
from .codes.scheme import SchemeDescriptor, SchemeInputs, make_descriptor, random_inputs
from .codes.thresholds import Mode
from .errors import ConfigError, EPCError
from .field import MERSENNE_61, PrimeField, field_context
from .matrix_io import read_matrix
from .sim import WorkerModel

KNOWN_KEYS = {
    "mode", "p", "m", "n", "N", "T", "L", "M", "D", "construction", "q", "seed",
    "inputs", "systematic", "worker_model",
}
_MODEL_KEYS = {"law", "t", "shift", "rate", "table", "stragglers", "straggler_factor", "seed"}


def _line_of(text: str, key: str) -> int | None:
    match = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, match.start()) + 1 if match else None


def build_construction(spec: Any, base_dir: Path, field: PrimeField, pmn: tuple | None = None) -> BilinearConstruction:
    """Turn a construction spec into a validated construction."""
    if isinstance(spec, str):
        word, *rest = spec.split()
        if word == "naive" and not rest:
            if pmn is None or None in pmn:
                raise ConfigError("'naive' needs p, m, n in the config (or use {\"naive\": [p, m, n]})")
            return naive_construction(*pmn)
        if word == "strassen" and not rest:
            return strassen_222()
        if word == "strassen_pow" and len(rest) == 1 and rest[0].isdigit():
            return strassen_power(int(rest[0]))
        raise ConfigError(f"unknown construction {spec!r}")
    if isinstance(spec, dict) and len(spec) == 1:
        (kind, arg), = spec.items()
        if kind == "naive" and isinstance(arg, list) and len(arg) == 3:
            return naive_construction(*(int(a) for a in arg))
        if kind == "strassen_pow" and isinstance(arg, int):
            return strassen_power(arg)
        if kind == "compose" and isinstance(arg, list) and arg:
            return reduce(tensor_compose, [build_construction(s, base_dir, field) for s in arg])
        if kind == "file" and isinstance(arg, str):
            path = Path(arg) if Path(arg).is_absolute() else base_dir / arg
            return load_construction(path, field)
    raise ConfigError(f"unrecognised construction spec {spec!r}")


@dataclass(frozen=True)
class ScenarioConfig:
    descriptor: SchemeDescriptor
    inputs_spec: dict
    worker_model: WorkerModel
    D: int | None
    base_dir: Path
    raw: dict

    def with_seed(self, seed: int) -> "ScenarioConfig":
        return ScenarioConfig(self.descriptor.replace(seed=seed), self.inputs_spec, self.worker_model,
                              self.D, self.base_dir, {**self.raw, "seed": seed})

    def build_inputs(self) -> SchemeInputs:
        desc = self.descriptor
        if "random" in self.inputs_spec:
            dims = self.inputs_spec["random"] or {}
            rng = np.random.default_rng(desc.seed)
            return random_inputs(desc, rng, dims.get("s"), dims.get("t"), dims.get("r"), D=self.D)
        return self._file_inputs(self.inputs_spec["files"])

    def _file_inputs(self, files: dict) -> SchemeInputs:
        desc = self.descriptor

        def load(entry, side_private):
            if isinstance(entry, str):
                entry = [[entry]]
            elif entry and all(isinstance(e, str) for e in entry):
                entry = [entry] if side_private else [[e] for e in entry]
            out = []
            for row in entry:
                mats = []
                for name in row:
                    path = Path(name) if Path(name).is_absolute() else self.base_dir / name
                    mat, q = read_matrix(path)
                    if q != desc.field.q:
                        raise ConfigError(f"{name} is over GF({q}) but the scenario uses GF({desc.field.q})")
                    mats.append(mat)
                out.append(tuple(mats))
            return tuple(out)

        try:
            A = load(files["A"], desc.mode is Mode.FULLY_PRIVATE)
            B = load(files["B"], desc.mode.is_private)
        except KeyError as exc:
            raise ConfigError(f"inputs.files is missing {exc}") from None
        return SchemeInputs(A, B, self.D)


def parse_config(text: str, base_dir: str | Path = ".") -> ScenarioConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, line=exc.lineno) from None
    if not isinstance(raw, dict):
        raise ConfigError("top level must be a JSON object", line=1)
    base_dir = Path(base_dir)

    def fail(key, msg):
        raise ConfigError(msg, line=_line_of(text, key))

    for key in raw:
        if key not in KNOWN_KEYS:
            fail(key, f"unknown key {key!r}")
    if "mode" not in raw:
        raise ConfigError("missing required key 'mode'", line=1)
    if "N" not in raw:
        raise ConfigError("missing required key 'N'", line=1)
    try:
        mode, batch = Mode.parse(str(raw["mode"]))
    except ValueError as exc:
        fail("mode", str(exc))
    for key in ("p", "m", "n", "N", "T", "L", "M", "D", "q", "seed"):
        if key in raw and (not isinstance(raw[key], int) or isinstance(raw[key], bool) or raw[key] < 0):
            fail(key, f"{key} must be a non-negative integer")
    if batch and "L" not in raw:
        fail("mode", "batch modes need L")

    D = raw.get("D")
    if mode.is_private and D is None:
        fail("mode", f"{mode.value} mode needs a request index D")
    if not mode.is_private and D is not None:
        fail("D", f"D only applies to private modes, not {mode.value}")

    try:
        field = field_context(raw.get("q", MERSENNE_61))
    except EPCError as exc:
        fail("q", str(exc))
    pmn = (raw.get("p"), raw.get("m"), raw.get("n"))
    cons = None
    if mode is not Mode.BASIC:
        if "construction" not in raw:
            fail("mode", f"{mode.value} needs a construction")
        try:
            cons = build_construction(raw["construction"], base_dir, field, pmn)
        except (EPCError, OSError, ValueError) as exc:
            fail("construction", str(exc))
    elif "construction" in raw:
        fail("construction", "basic mode takes no construction")

    model_raw = raw.get("worker_model", {})
    if not isinstance(model_raw, dict) or set(model_raw) - _MODEL_KEYS:
        fail("worker_model", f"worker_model keys must be among {sorted(_MODEL_KEYS)}")
    try:
        model_args = dict(model_raw)
        if "table" in model_args:
            model_args["table"] = tuple(float(x) for x in model_args["table"])
        model_args["stragglers"] = tuple(int(w) for w in model_args.get("stragglers", ()))
        if model_args.get("straggler_factor") in ("inf", None):
            model_args["straggler_factor"] = math.inf
        model = WorkerModel(**model_args)
    except (TypeError, ValueError) as exc:
        fail("worker_model", str(exc))

    inputs = raw.get("inputs", {"random": {}})
    if not isinstance(inputs, dict) or len(inputs) != 1 or next(iter(inputs)) not in ("random", "files"):
        fail("inputs", "inputs must be {\"random\": {...}} or {\"files\": {...}}")

    kwargs = {k: raw[k] for k in ("T", "L", "M", "seed") if k in raw}
    if raw.get("systematic"):
        kwargs["systematic"] = True
    try:
        desc = make_descriptor(mode, N=raw["N"], construction=cons, p=pmn[0], m=pmn[1], n=pmn[2],
                               field=field, **kwargs)
    except EPCError as exc:
        msg = str(exc)
        key = "N" if "threshold" in msg or "distinct points" in msg else "mode"
        fail(key, msg)
    if D is not None and not 0 <= D < desc.M:
        fail("D", f"D={D} outside [0, M={desc.M})")
    for w in model.stragglers:
        if w >= desc.N:
            fail("worker_model", f"straggler index {w} outside [0, {desc.N})")
    return ScenarioConfig(desc, inputs, model, D, base_dir, raw)


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    return parse_config(path.read_text(), path.parent)
