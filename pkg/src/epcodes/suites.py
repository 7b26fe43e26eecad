"""Built-in parameter grids for ``epc verify``.

Each suite returns ``(name, AuditReport)`` pairs. ``tiny`` finishes in
seconds; ``standard`` covers the headline parameters (Strassen, R=7).
"""

from __future__ import annotations

from importlib import resources
from typing import Callable

from .bilinear import (
    load_construction,
    naive_construction,
    strassen_222,
    strassen_power,
    tensor_compose,
    validate,
)
from .codes.scheme import make_descriptor
from .field import PrimeField, field_context
from .verifier import (
    AuditReport,
    TinyScheme,
    exact_mutual_information,
    privacy_distribution_check,
    secrecy_rank_certificate,
    threshold_audit,
)

SCALES = ("tiny", "standard")


def bundled_constructions(field: PrimeField) -> dict:
    found = {}
    for entry in resources.files("epcodes").joinpath("data").iterdir():
        if entry.name.startswith("construction_") and entry.name.endswith(".json"):
            with resources.as_file(entry) as path:
                found[entry.name] = load_construction(path, field)
    return found


def constructions_suite(scale: str = "tiny", seed: int = 0) -> list[tuple[str, AuditReport]]:
    field = field_context()
    top = 2 if scale == "tiny" else 3
    cases = {
        f"naive({p},{m},{n})": naive_construction(p, m, n)
        for p in range(1, top + 1) for m in range(1, top + 1) for n in range(1, top + 1)
    }
    cases["strassen_222"] = strassen_222()
    cases["strassen x naive(2,2,2)"] = tensor_compose(strassen_222(), naive_construction(2, 2, 2))
    if scale == "standard":
        cases["strassen_pow 2"] = strassen_power(2)
    out = []
    for name, cons in cases.items():
        result = validate(cons, field)
        report = AuditReport("construction", {"name": name, "shape": cons.shape, "R": cons.R}, "brent",
                             subsets_tested=1, seed=seed)
        if not result:
            report.failures.append({"counterexample": result.counterexample, "detail": result.detail})
        out.append((name, report))
    for name, cons in bundled_constructions(field).items():
        # loading already validates exactly; record it for the matrix
        out.append((name, AuditReport("construction", {"name": name, "R": cons.R}, "brent", 1, seed=seed)))
    return out


def thresholds_suite(scale: str = "tiny", seed: int = 0) -> list[tuple[str, AuditReport]]:
    S = strassen_222()
    n1 = naive_construction(1, 1, 1)
    if scale == "tiny":
        specs = [
            ("basic (2,2,2) N=10", dict(mode="basic", N=10, p=2, m=2, n=2)),
            ("improved naive(1,2,1) N=6", dict(mode="improved", N=6, construction=naive_construction(1, 2, 1))),
            ("one_sided T=1 R=1 N=4", dict(mode="one_sided_secure", N=4, T=1, construction=n1)),
            ("fully_secure T=1 R=1 N=5", dict(mode="fully_secure", N=5, T=1, construction=n1)),
            ("private M=2 R=1 N=3", dict(mode="private", N=3, M=2, construction=n1)),
            ("private_secure M=2 R=1 N=4", dict(mode="private_secure", N=4, M=2, construction=n1)),
            ("fully_private M=2 R=1 N=4", dict(mode="fully_private", N=4, M=2, construction=n1)),
            ("batch L=2 R=1 N=4", dict(mode="batch_improved", N=4, L=2, construction=n1)),
        ]
    else:
        specs = [
            ("basic (2,2,2) N=10", dict(mode="basic", N=10, p=2, m=2, n=2)),
            ("improved strassen N=14", dict(mode="improved", N=14, construction=S)),
            ("improved systematic N=14", dict(mode="improved", N=14, construction=S, systematic=True)),
            ("one_sided T=2 N=20", dict(mode="one_sided_secure", N=20, T=2, construction=S)),
            ("fully_secure T=2 N=22", dict(mode="fully_secure", N=22, T=2, construction=S)),
            ("private M=3 N=16", dict(mode="private", N=16, M=3, construction=S)),
            ("private_secure M=3 N=17", dict(mode="private_secure", N=17, M=3, construction=S)),
            ("fully_private M=2 N=17", dict(mode="fully_private", N=17, M=2, construction=S)),
            ("batch L=2 N=29", dict(mode="batch_improved", N=29, L=2, construction=S)),
            ("batch fully_secure T=1 L=2 N=31", dict(mode="batch_fully_secure", N=31, T=1, L=2, construction=S)),
            ("batch private L=2 N=30", dict(mode="batch_private", N=30, M=2, L=2, construction=S)),
            ("batch private_secure L=2 N=31", dict(mode="batch_private_secure", N=31, M=2, L=2, construction=S)),
            ("batch fully_private L=2 N=31", dict(mode="batch_fully_private", N=31, M=2, L=2, construction=S)),
        ]
    out = []
    for name, kw in specs:
        mode = kw.pop("mode")
        desc = make_descriptor(mode, seed=seed, **kw)
        out.append((name, threshold_audit(desc, samples=50 if scale == "tiny" else 100, seed=seed)))
    return out


def _mi_report(name: str, scheme: TinyScheme, seed: int) -> AuditReport:
    mi = exact_mutual_information(scheme)
    report = AuditReport(scheme.mode.value, {"q": scheme.field.q, "T": scheme.T, "ys": list(scheme.ys)},
                         "enumeration", subsets_tested=mi.states, seed=seed)
    if not mi.is_zero:
        report.failures.append({"error": f"mutual information {mi.bits:.6f} bits"})
    return report


def secrecy_suite(scale: str = "tiny", seed: int = 0) -> list[tuple[str, AuditReport]]:
    out = []
    F5 = PrimeField(5)
    n1 = naive_construction(1, 1, 1)
    # every single worker at q=5, R=1, T=1 (nodes 0,1; the other points are all possible workers)
    for mode in ("one_sided_secure", "fully_secure"):
        for y in range(2, 5):
            out.append((f"{mode} q=5 worker y={y} MI", _mi_report(mode, TinyScheme(mode, n1, F5, 1, (y,)), seed)))
    if scale == "tiny":
        d = make_descriptor("one_sided_secure", N=4, T=1, construction=n1, seed=seed)
        out.append(("one_sided T=1 rank", secrecy_rank_certificate(d, "A")))
        d = make_descriptor("fully_secure", N=5, T=1, construction=n1, seed=seed)
        out.append(("fully_secure T=1 rank", secrecy_rank_certificate(d, "both")))
        d = make_descriptor("private_secure", N=4, M=2, construction=n1, seed=seed)
        out.append(("private_secure rank", secrecy_rank_certificate(d, "A")))
        return out
    F7 = PrimeField(7)
    out.append(("one_sided q=7 T=2 pair MI", _mi_report("one_sided_secure", TinyScheme("one_sided_secure", n1, F7, 2, (3, 4)), seed)))
    S = strassen_222()
    for mode, N, side in (("one_sided_secure", 17, "A"), ("fully_secure", 17, "both")):
        d = make_descriptor(mode, N=N, T=2, construction=S, seed=seed)
        out.append((f"{mode} T=2 N={N} rank", secrecy_rank_certificate(d, side)))
    d = make_descriptor("private_secure", N=15, M=3, construction=S, seed=seed)
    out.append(("private_secure R=7 rank", secrecy_rank_certificate(d, "A")))
    d = make_descriptor("batch_fully_secure", N=29, T=1, L=2, construction=S, seed=seed)
    out.append(("batch fully_secure T=1 rank", secrecy_rank_certificate(d, "both")))
    return out


def privacy_suite(scale: str = "tiny", seed: int = 0) -> list[tuple[str, AuditReport]]:
    out = []
    F11 = PrimeField(11)
    n1 = naive_construction(1, 1, 1)
    ys = tuple(range(2, 7))
    for M in (1, 2):
        for mode in ("private", "fully_private"):
            out.append((f"{mode} M={M} N=2 |Y|=5", privacy_distribution_check(M, 2, ys, mode)))
    for mode, N in (("private", 2), ("private_secure", 3)):
        d = make_descriptor(mode, N=N, M=2, construction=n1, field=F11, seed=seed)
        out.append((f"{mode} M=2 with A-shares q=11", privacy_distribution_check(2, 2, ys, mode, desc=d)))
    if scale == "standard":
        for mode in ("private", "fully_private"):
            out.append((f"{mode} M=3 N=3 |Y|=5", privacy_distribution_check(3, 3, ys, mode)))
        out.append(("private M=2 N=3 |Y|=6", privacy_distribution_check(2, 3, tuple(range(2, 8)), "private")))
    for _, r in out:
        r.seed = seed
    return out


SUITES: dict[str, Callable] = {
    "constructions": constructions_suite,
    "thresholds": thresholds_suite,
    "secrecy": secrecy_suite,
    "privacy": privacy_suite,
}
