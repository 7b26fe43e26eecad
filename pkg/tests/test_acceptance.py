"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line (visible even
under output capture) and fails if the check or its time budget fails.
Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import contextlib
import io
import itertools
import json
import time

import numpy as np
import pytest

from epcodes.bilinear import naive_construction, strassen_222, strassen_power, tensor_compose, validate
from epcodes.blocks import partition
from epcodes.cli import main as cli_main
from epcodes.codes.lagrange import batch_pre_encode, recover_products
from epcodes.codes.private import private_recover_products
from epcodes.codes.scheme import decode, encode, make_descriptor, oracle, random_inputs
from epcodes.errors import NotEnoughResults
from epcodes.field import MERSENNE_61, PrimeField, field_context
from epcodes.sim import WorkerModel, rows_to_csv, simulate, sweep
from epcodes.verifier import (
    TinyScheme,
    exact_mutual_information,
    privacy_distribution_check,
    secrecy_rank_certificate,
    threshold_audit,
)


@pytest.fixture
def report(capsys):
    """Call ``report(n, budget, check)``; ``check`` returns ``(ok, detail)``."""

    def run(number, budget, check):
        start = time.perf_counter()
        try:
            ok, detail = check()
        except Exception as exc:  # reported as a failed criterion
            ok, detail = False, f"raised {exc!r}"
        elapsed = time.perf_counter() - start
        in_time = elapsed < budget
        status = "PASS" if ok and in_time else "FAIL"
        note = detail if in_time else f"{detail}; over budget"
        with capsys.disabled():
            print(f"\ncriterion {number}: {status} ({elapsed:.2f}s of {budget}s) {note}")
        assert ok, detail
        assert in_time, f"took {elapsed:.2f}s, budget {budget}s"

    return run


def test_criterion_01_constructions(report):
    def check():
        F = field_context()
        cases = [naive_construction(p, m, n) for p, m, n in itertools.product(range(1, 4), repeat=3)]
        ss = strassen_power(2)
        cases += [strassen_222(), ss, tensor_compose(strassen_222(), naive_construction(2, 2, 2))]
        bad = [c.name for c in cases if not validate(c, F)]
        ok = not bad and ss.shape == (4, 4, 4) and ss.R == 49
        return ok, f"{len(cases)} constructions validated" if ok else f"invalid: {bad}"

    report(1, 10, check)


def test_criterion_02_basic_threshold(report):
    def check():
        desc = make_descriptor("basic", N=10, p=2, m=2, n=2, field=field_context(MERSENNE_61))
        inputs = random_inputs(desc, np.random.default_rng(2), 4, 4, 4)
        audit = threshold_audit(desc, inputs, seed=2)
        ok = audit.passed and audit.subsets_tested == 10 and desc.threshold == 9
        return ok, f"{audit.subsets_tested} subsets of size 9 decoded exactly"

    report(2, 5, check)


def test_criterion_03_improved_threshold(report):
    def check():
        desc = make_descriptor("improved", N=14, construction=strassen_222())
        inputs = random_inputs(desc, np.random.default_rng(3), 4, 4, 4)
        job = encode(desc, inputs)
        audit = threshold_audit(desc, inputs, seed=3, job=job)
        results = job.compute_all()
        try:
            decode(desc, job, results[:12])
            rejected = False
        except NotEnoughResults:
            rejected = True
        ok = audit.passed and audit.subsets_tested == 14 and desc.threshold == 13 and rejected
        return ok, f"14/14 subsets of size 13 decoded; 12 results rejected={rejected}"

    report(3, 5, check)


def test_criterion_04_secure_thresholds(report):
    def check():
        S = strassen_222()
        details = []
        ok = True
        for mode, T, N, expected, side in (("one_sided_secure", 2, 20, 15, "A"), ("fully_secure", 2, 22, 17, "both")):
            desc = make_descriptor(mode, N=N, T=T, construction=S, seed=4)
            inputs = random_inputs(desc, np.random.default_rng(4), 4, 4, 4)
            audit = threshold_audit(desc, inputs, samples=200, seed=4)
            rank = secrecy_rank_certificate(desc, side)
            pairs = N * (N - 1) // 2 * (2 if side == "both" else 1)
            ok &= (desc.threshold == expected and audit.passed and audit.subsets_tested >= 200
                   and rank.passed and rank.subsets_tested == pairs)
            details.append(f"{mode}: threshold {desc.threshold}, {audit.subsets_tested} subsets, "
                           f"{rank.subsets_tested} collusion pairs invertible")
        return ok, "; ".join(details)

    report(4, 30, check)


def test_criterion_05_exact_secrecy(report):
    def check():
        F5 = PrimeField(5)
        n1 = naive_construction(1, 1, 1)
        zero = all(
            exact_mutual_information(TinyScheme(mode, n1, F5, 1, (y,))).is_zero
            for mode in ("one_sided_secure", "fully_secure") for y in (2, 3, 4)
        )
        control = exact_mutual_information(TinyScheme("improved", n1, F5, 0, (2,)))
        ok = zero and not control.is_zero and control.bits > 0
        return ok, f"secure MI exactly zero for every worker={zero}; T=0 control MI={control.bits:.4f} bits"

    report(5, 60, check)


def test_criterion_06_private_thresholds(report):
    def check():
        S = strassen_222()
        ok = True
        details = []
        for mode, N, expected in (("private", 16, 14), ("private_secure", 17, 15)):
            desc = make_descriptor(mode, N=N, M=3, construction=S, seed=6)
            inputs = random_inputs(desc, np.random.default_rng(6), 4, 4, 4, D=1)
            audit = threshold_audit(desc, inputs, seed=6)
            ok &= desc.threshold == expected and audit.passed
            details.append(f"{mode} threshold {desc.threshold} ({audit.subsets_tested} subsets)")
        F11 = PrimeField(11)
        n1 = naive_construction(1, 1, 1)
        ys = range(2, 7)
        privacy = privacy_distribution_check(2, 2, ys, "private").passed
        for mode, N in (("private", 2), ("private_secure", 3)):
            d = make_descriptor(mode, N=N, M=2, construction=n1, field=F11)
            privacy &= privacy_distribution_check(2, 2, ys, mode, desc=d).passed
        ok &= privacy
        details.append(f"Q_i distributions identical for all D={privacy}")
        return ok, "; ".join(details)

    report(6, 60, check)


def test_criterion_07_fully_private(report):
    def check():
        F13 = PrimeField(13)
        desc = make_descriptor("fully_private", N=4, M=2, construction=naive_construction(1, 1, 1), field=F13)
        ok = desc.threshold == 3
        subsets = 0
        squared_needed = False
        for D in (0, 1):
            inputs = random_inputs(desc, np.random.default_rng(70 + D), D=D)
            job = encode(desc, inputs, np.random.default_rng(D))
            results = job.compute_all()
            expected = oracle(desc, inputs)[0]
            for subset in itertools.combinations(results, 3):
                ok &= np.array_equal(decode(desc, job, list(subset))[0], expected)
                subsets += 1
                # single c(y) rescaling is not enough: the c^2 path is what decodes
                once = private_recover_products(F13, list(subset), job.record, desc.points.xs, 3, power=1)
                squared_needed |= not np.array_equal(once[0], expected)
        ok &= squared_needed
        return ok, f"{subsets} subsets decode A(D)^T B(D) for D in {{0,1}}; c^2 rescaling required={squared_needed}"

    report(7, 10, check)


def test_criterion_08_batch(report):
    def check():
        S = strassen_222()
        ok = True
        details = []
        for mode, extra, expected in (
            ("batch_improved", {}, 27),
            ("batch_fully_secure", {"T": 1}, 29),
            ("batch_private", {"M": 2}, 28),
            ("batch_private_secure", {"M": 2}, 29),
            ("batch_fully_private", {"M": 2}, 29),
        ):
            desc = make_descriptor(mode, N=expected + 2, L=2, construction=S, seed=8, **extra)
            inputs = random_inputs(desc, np.random.default_rng(8), 4, 4, 4, D=1)
            audit = threshold_audit(desc, inputs, exhaustive_cap=0, samples=40, seed=8)
            ok &= desc.threshold == expected and audit.passed
            details.append(f"{mode}={desc.threshold}")
        return ok, ", ".join(details) + " (40 sampled subsets each)"

    report(8, 60, check)


def test_criterion_09_crossover(report):
    def check():
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = cli_main(["thresholds", "--format", "json"])
        cross = json.loads(buf.getvalue())["crossover"]
        ok = code == 0 and cross == {"k": 6, "improved": 235297, "basic": 262207}
        return ok, f"k={cross['k']} ({cross['improved']} < {cross['basic']})"

    report(9, 1, check)


def test_criterion_10_systematic(report):
    def check():
        F = field_context()
        S = strassen_222()
        desc = make_descriptor("improved", N=14, construction=S, systematic=True)
        inputs = random_inputs(desc, np.random.default_rng(10), 4, 4, 4)
        a_vec, b_vec = batch_pre_encode(F, S, [(partition(inputs.A[0][0], 2, 2), partition(inputs.B[0][0], 2, 2))])
        job = encode(desc, inputs)
        results = job.compute_all()
        uncoded = all(np.array_equal(results[i][1], F.tmatmul(a_vec[i], b_vec[i])) for i in range(7))
        pairs = [(job.ys[w], v) for w, v in results]
        fast = recover_products(F, pairs[:7], desc.points.xs, 7, 13)
        slow = recover_products(F, pairs[1:], desc.points.xs, 7, 13)
        same = all(np.array_equal(x, y) for x, y in zip(fast, slow))
        correct = np.array_equal(decode(desc, job, results[:7])[0], oracle(desc, inputs)[0])
        ok = uncoded and same and correct and desc.points.ys[:7] == desc.points.xs[:7]
        return ok, f"systematic results uncoded={uncoded}; fast path equals interpolation={same}"

    report(10, 5, check)


def test_criterion_11_stragglers(report):
    def check():
        desc = make_descriptor("improved", N=14, construction=strassen_222())
        singles = all(simulate(desc, model=WorkerModel(stragglers=(s,))).decoded_ok is True for s in range(14))
        pairs = [simulate(desc, model=WorkerModel(stragglers=pair)) for pair in ((0, 1), (5, 13))]
        incomplete = all(r.incomplete and r.decoded_ok is False for r in pairs)
        model = WorkerModel(law="shifted_exponential", rate=2.0)
        a = rows_to_csv(sweep(desc, [13, 14, 16], [0, 1, 2], trials=3, model=model, seed=11))
        b = rows_to_csv(sweep(desc, [13, 14, 16], [0, 1, 2], trials=3, model=model, seed=11))
        ok = singles and incomplete and a == b
        return ok, f"every single straggler tolerated={singles}; 2 stragglers Incomplete={incomplete}; sweep identical={a == b}"

    report(11, 10, check)
