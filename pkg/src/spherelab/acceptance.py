"""The numbered acceptance experiments, each runnable as one call.

Every experiment returns an ExperimentResult whose payload dict is fully
deterministic (fixed seeds, no timestamps, no timings), so serialized
reports are byte-identical across reruns and worker counts.  Elapsed time
is carried next to the payload, never inside it.

Oracles here are deliberately independent of the library paths they check:
representation counts are re-derived by nested coordinate enumeration, and
multilinear averages by walking the joint sphere in Z^(l*d) directly.
"""

from __future__ import annotations

import itertools
import time
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import counts as _counts
from . import grids as _grids
from . import operators as _ops
from . import sharpness as _sharp
from ._convolve import convolve_trunc
from .counts import SphereSpec, growth_exponent_fit, rep_counts
from .grids import GridFunction, make_box_indicator, make_delta
from .operators import (
    Normalization,
    OperatorConfig,
    domination_check,
    multilinear_average,
)
from .sharpness import WitnessSpec, critical_r, decay_fit, p0_bound, partial_norm_scan, r0_bound, region_classify

ACCEPTANCE_SEED = 20250808


@dataclass(frozen=True)
class ExperimentResult:
    number: int
    name: str
    passed: bool
    payload: dict
    elapsed_seconds: float

    def headline(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  criterion {self.number}: {self.name}"


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------

def brute_rep_count_table(dim: int, degree: int, lam_max: int) -> list[int]:
    """Histogram of sum |u_i|^k over a full coordinate enumeration."""
    out = [0] * (lam_max + 1)
    root = 0
    while (root + 1) ** degree <= lam_max:
        root += 1
    coords = range(-root, root + 1)
    powers = {y: abs(y) ** degree for y in coords}
    for u in itertools.product(coords, repeat=dim):
        s = sum(powers[c] for c in u)
        if s <= lam_max:
            out[s] += 1
    return out


def brute_joint_shell(dim_total: int, degree: int, lam: int) -> list[tuple[int, ...]]:
    """All w in Z^(dim_total) with sum |w_i|^k = lam, by recursive descent."""
    pts: list[tuple[int, ...]] = []
    buf = [0] * dim_total

    def rec(axis: int, remaining: int) -> None:
        if axis == dim_total:
            if remaining == 0:
                pts.append(tuple(buf))
            return
        root = 0
        while (root + 1) ** degree <= remaining:
            root += 1
        for y in range(-root, root + 1):
            buf[axis] = y
            rec(axis + 1, remaining - abs(y) ** degree)

    rec(0, lam)
    return pts


def brute_multilinear_average(
    fs: list[GridFunction], lam: int, spec: SphereSpec, linearity: int, exact: bool
) -> dict[tuple[int, ...], float]:
    """Joint-sphere walk in Z^(l*d): the sum behind T_lam, point by point."""
    d = spec.dim
    shell = brute_joint_shell(d * linearity, spec.degree, lam)
    acc: dict[tuple[int, ...], float] = {}
    for w in shell:
        parts = [w[j * d : (j + 1) * d] for j in range(linearity)]
        for y, v0 in fs[0].items_sorted():
            x = tuple(a + b for a, b in zip(y, parts[0]))
            prod = v0
            for j in range(1, linearity):
                prod *= fs[j].value(tuple(a - b for a, b in zip(x, parts[j])))
                if prod == 0.0:
                    break
            if prod != 0.0:
                acc[x] = acc.get(x, 0.0) + prod
    if exact:
        n_points = len(shell)
        if n_points == 0:
            return {}
        return {x: v / n_points for x, v in acc.items() if v != 0.0}
    norm = float(lam) ** (linearity * d / spec.degree - 1.0)
    return {x: v / norm for x, v in acc.items() if v != 0.0}


def random_sparse_function(rng, dim: int, *, nonnegative: bool, max_support: int = 8,
                           coord_range: int = 4) -> GridFunction:
    size = int(rng.integers(2, max_support + 1))
    vals: dict[tuple[int, ...], float] = {}
    while len(vals) < size:
        p = tuple(int(c) for c in rng.integers(-coord_range, coord_range + 1, size=dim))
        v = float(rng.uniform(0.1, 1.0) if nonnegative else rng.uniform(-1.0, 1.0))
        vals[p] = v
    return GridFunction(dim, vals)


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------

def experiment_1() -> ExperimentResult:
    """Count-oracle equivalence and the exact convolution identity."""
    t0 = time.perf_counter()
    mismatches = []
    for d in (1, 2, 3):
        for k in (2, 3, 4):
            table = rep_counts(SphereSpec(d, k), 200)
            brute = brute_rep_count_table(d, k, 200)
            if list(table.counts) != brute:
                mismatches.append({"dim": d, "degree": k})
    identity_fail = []
    lam_max = 10_000
    for k in (2, 3):
        tables = {
            m: list(rep_counts(SphereSpec(m, k), lam_max).counts) for m in range(1, 11)
        }
        for total in range(2, 11):
            for a in range(1, total // 2 + 1):
                b = total - a
                conv = convolve_trunc(tables[a], tables[b], lam_max + 1)
                if conv != tables[total]:
                    identity_fail.append({"degree": k, "split": [a, b]})
    passed = not mismatches and not identity_fail
    payload = {
        "oracle_scope": "dim <= 3, degree <= 4, lam <= 200",
        "oracle_mismatches": mismatches,
        "identity_scope": "splits a+b <= 10, degree in {2,3}, lam <= 10000",
        "identity_failures": identity_fail,
    }
    return ExperimentResult(1, "count oracle + convolution identity", passed, payload,
                            time.perf_counter() - t0)


def experiment_2() -> ExperimentResult:
    """Dyadic-block growth exponents in composed dimensions 10 and 6."""
    t0 = time.perf_counter()
    lam_max = 2**17
    window = (2**10, 2**17)
    rows = []
    passed = True
    for m, expect, tol in ((10, 4.0, 0.05), (6, 2.0, 0.05)):
        report = growth_exponent_fit(rep_counts(SphereSpec(m, 2), lam_max), window)
        ok = abs(report.fitted_slope - expect) <= tol
        passed = passed and ok
        rows.append(
            {
                "dimension": m,
                "slope": report.fitted_slope,
                "expected": expect,
                "tolerance": tol,
                "residual": report.residual,
                "ok": ok,
            }
        )
    payload = {"lambda_max": lam_max, "window": list(window), "fits": rows}
    return ExperimentResult(2, "growth exponent, dimensions 10 and 6", passed, payload,
                            time.perf_counter() - t0)


def experiment_3() -> ExperimentResult:
    """Slice-decomposition averages vs joint-sphere brute force, 200 instances."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(ACCEPTANCE_SEED)
    worst = 0.0
    failures = []
    for trial in range(200):
        d = int(rng.integers(1, 3))
        ell = int(rng.integers(2, 4))
        k = int(rng.integers(2, 4))
        lam = int(rng.integers(1, 61))
        exact = bool(rng.integers(0, 2))
        spec = SphereSpec(d, k)
        fs = [random_sparse_function(rng, d, nonnegative=False, max_support=6,
                                     coord_range=3) for _ in range(ell)]
        cfg = OperatorConfig(spec, ell, lam,
                             Normalization.EXACT if exact else Normalization.ASYMPTOTIC)
        if exact and _counts.joint_count(spec, ell, lam) == 0:
            exact = False
            cfg = OperatorConfig(spec, ell, lam, Normalization.ASYMPTOTIC)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            got = multilinear_average(fs, lam, cfg)
        want = brute_multilinear_average(fs, lam, spec, ell, exact)
        keys = set(got.values) | set(want.keys())
        scale = max((abs(v) for v in want.values()), default=1.0) or 1.0
        for key in keys:
            diff = abs(got.value(key) - want.get(key, 0.0))
            rel = diff / scale
            worst = max(worst, rel)
            if rel > 1e-12:
                failures.append({"trial": trial, "dim": d, "linearity": ell,
                                 "degree": k, "lam": lam, "rel_error": rel})
                break
    payload = {
        "instances": 200,
        "scope": "dim <= 2, linearity <= 3, degree <= 3, lam <= 60",
        "seed": ACCEPTANCE_SEED,
        "worst_relative_error": worst,
        "failures": failures,
    }
    return ExperimentResult(3, "slice decomposition vs brute force", not failures,
                            payload, time.perf_counter() - t0)


def _domination_pairs(rng) -> list[tuple[str, GridFunction, str, GridFunction]]:
    """Pair cover of the pool {box, delta, 20 randoms}: the box/delta
    combinations plus a perfect matching of the randoms; every pair is
    checked in both argument orders by the caller."""
    box = make_box_indicator(5, 1)
    delta = make_delta(5)
    randoms = [random_sparse_function(rng, 5, nonnegative=True) for _ in range(20)]
    pairs = [
        ("box", box, "delta", delta),
        ("box", box, "box", box),
        ("delta", delta, "delta", delta),
        ("box", box, "rand00", randoms[0]),
        ("delta", delta, "rand01", randoms[1]),
    ]
    for i in range(10):
        pairs.append((f"rand{i:02d}", randoms[i], f"rand{i + 10:02d}", randoms[i + 10]))
    return pairs


def experiment_4() -> ExperimentResult:
    """Pointwise domination of T* by M(f) * S~(g), both argument orders."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(ACCEPTANCE_SEED + 4)
    spec = SphereSpec(5, 2)
    lam_max = 50
    rows = []
    passed = True
    for name_f, f, name_g, g in _domination_pairs(rng):
        for fn, fv, gn, gv in ((name_f, f, name_g, g), (name_g, g, name_f, f)):
            rep = domination_check(fv, gv, spec, lam_max)
            ok = rep.max_violation <= 1e-9
            passed = passed and ok
            rows.append(
                {
                    "f": fn,
                    "g": gn,
                    "max_violation": rep.max_violation,
                    "points_checked": rep.points_checked,
                    "ok": ok,
                }
            )
    payload = {
        "lambda_max": lam_max,
        "seed": ACCEPTANCE_SEED + 4,
        "pair_count": len(rows),
        "tolerance": 1e-9,
        "checks": rows,
    }
    return ExperimentResult(4, "pointwise domination, both orders", passed, payload,
                            time.perf_counter() - t0)


def experiment_5() -> ExperimentResult:
    """Witness decay exponents along e_1 for degrees 2 and 3."""
    t0 = time.perf_counter()
    rows = []
    passed = True
    for k, expect, tol in ((2, -8.0, 0.2), (3, -7.0, 0.3)):
        spec = WitnessSpec(dim=5, degree=k, linearity=2, box_radius=1)
        rep = decay_fit(spec, (1, 0, 0, 0, 0), (10, 2000))
        ok = abs(rep.fitted_slope - expect) <= tol
        passed = passed and ok
        rows.append(
            {
                "degree": k,
                "slope": rep.fitted_slope,
                "expected": expect,
                "tolerance": tol,
                "residual": rep.residual,
                "ok": ok,
            }
        )
    payload = {"ray": [1, 0, 0, 0, 0], "t_range": [10, 2000], "fits": rows}
    return ExperimentResult(5, "witness decay exponents", passed, payload,
                            time.perf_counter() - t0)


def experiment_6() -> ExperimentResult:
    """Critical-exponent dichotomy via sampled dyadic shell-sum ratios.

    Shells run from 128 to 2048: below that the candidate-level collisions
    of the witness are still thinning out and the ratios sit under their
    asymptotic limit (the scan reports them; the gate uses the stable range).
    """
    t0 = time.perf_counter()
    radii = [128, 256, 512, 1024, 2048]
    spec = WitnessSpec(dim=5, degree=2, linearity=2, box_radius=1)
    rows = []
    passed = True
    for r_exp, band, prediction in ((0.7, (0.55, 0.75), 2.0 ** (5 - 8 * 0.7)),
                                    (0.625, (0.85, 1.15), 1.0)):
        scan = partial_norm_scan(spec, r_exp, radii, seed=ACCEPTANCE_SEED)
        ok = all(band[0] <= x <= band[1] for x in scan.ratios)
        passed = passed and ok
        rows.append(
            {
                "r": r_exp,
                "band": list(band),
                "asymptotic_prediction": prediction,
                "shell_sums": scan.shell_sums,
                "ratios": scan.ratios,
                "region_modes": scan.region_modes,
                "ok": ok,
            }
        )
    payload = {"radii": radii, "seed": ACCEPTANCE_SEED, "scans": rows}
    return ExperimentResult(6, "shell-ratio dichotomy at the critical exponent",
                            passed, payload, time.perf_counter() - t0)


REGION_PROBES: list[tuple[float | str, float | str, float | str, int, str]] = [
    (2, 2, 1, 5, "BOUNDED"),          # interior of the bounded range
    (2, 2, 0.6, 5, "UNBOUNDED"),      # below critical 5/8
    (1, 2, 1, 5, "UNKNOWN"),          # p = 1 endpoint
    (2, 1, 1, 5, "UNKNOWN"),          # q = 1 endpoint
    ("5/8", 1, 1, 5, "UNKNOWN"),      # p < 1
    (2, 2, "5/8", 5, "UNBOUNDED"),    # exactly critical (strict convention)
    (2, 2, 1, 4, "UNKNOWN"),          # dimension 4 defers to other methods
    (4, 4, 1, 5, "UNKNOWN"),          # Holder-deficient: 1/4+1/4 < 1
    ("3/2", "3/2", "3/4", 5, "BOUNDED"),  # Holder equality, r above critical
]


def experiment_7() -> ExperimentResult:
    """Exact exponent formulas and the nine region-classifier probes."""
    t0 = time.perf_counter()
    problems = []
    if critical_r(5, 2, 2) != Fraction(5, 8):
        problems.append("critical_r(5,2,2) != 5/8")
    for d in range(3, 9):
        for ell in range(2, 5):
            if critical_r(d, 2, ell) != Fraction(d, ell * d - 2):
                problems.append(f"critical_r({d},2,{ell})")
    r0_expect = {
        (Fraction(0), 2): Fraction(2, 3),
        (Fraction(1, 4), 2): Fraction(5, 8),
        (Fraction(1, 2), 2): Fraction(3, 5),
        (Fraction(0), 3): Fraction(2, 5),
        (Fraction(1, 4), 3): Fraction(5, 13),
        (Fraction(1, 2), 3): Fraction(3, 8),
    }
    for (d0, ell), want in r0_expect.items():
        if r0_bound(d0, ell) != want:
            problems.append(f"r0_bound({d0},{ell}) != {want}")
    p0_expect = {
        (Fraction(0), 5, 2): Fraction(2),
        (Fraction(0), 5, 3): Fraction(5, 2),
        (Fraction(0), 5, 4): Fraction(5),
        (Fraction(1, 4), 5, 2): Fraction(5, 3),
        (Fraction(1, 2), 5, 2): Fraction(5, 3),
        (Fraction(1, 2), 7, 3): Fraction(7, 4),
    }
    for (d0, d, k), want in p0_expect.items():
        if p0_bound(d0, d, k) != want:
            problems.append(f"p0_bound({d0},{d},{k}) != {want}")
    probe_rows = []
    for p, q, r, d, want in REGION_PROBES:
        verdict = region_classify(p, q, r, d)
        ok = verdict.verdict == want
        if not ok:
            problems.append(f"region_classify({p},{q},{r},{d}) = {verdict.verdict}, want {want}")
        probe_rows.append(
            {"p": str(p), "q": str(q), "r": str(r), "dim": d,
             "verdict": verdict.verdict, "expected": want, "ok": ok}
        )
    payload = {"problems": problems, "region_probes": probe_rows}
    return ExperimentResult(7, "exponent formulas + region probes", not problems,
                            payload, time.perf_counter() - t0)


EXPERIMENTS = {
    1: experiment_1,
    2: experiment_2,
    3: experiment_3,
    4: experiment_4,
    5: experiment_5,
    6: experiment_6,
    7: experiment_7,
}


def run_experiment(number: int) -> ExperimentResult:
    if number not in EXPERIMENTS:
        raise ValueError(f"no acceptance experiment {number}; choose 1..7")
    return EXPERIMENTS[number]()
