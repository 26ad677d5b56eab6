import math
import random
from fractions import Fraction

import numpy as np
import pytest

from spherelab import (
    AnalysisError,
    Normalization,
    OperatorConfig,
    ParameterError,
    SphereSpec,
    WitnessSpec,
    critical_r,
    decay_fit,
    make_box_indicator,
    make_delta,
    multilinear_maximal,
    p0_bound,
    partial_norm_scan,
    r0_bound,
    region_classify,
    witness_value,
    witness_values,
)

from oracles import brute_witness

W5 = WitnessSpec(dim=5, degree=2, linearity=2, box_radius=1)


def test_critical_r_values():
    assert critical_r(5, 2, 2) == Fraction(5, 8)
    assert critical_r(3, 2, 2) == Fraction(3, 4)
    assert critical_r(5, 3, 2) == Fraction(5, 7)


def test_critical_r_degree_two_formula():
    for d in range(3, 9):
        for ell in range(2, 5):
            assert critical_r(d, 2, ell) == Fraction(d, ell * d - 2)


def test_critical_r_rejects_degenerate():
    with pytest.raises(ParameterError):
        critical_r(1, 2, 2)  # l*d = k
    with pytest.raises(ParameterError):
        critical_r(1, 3, 2)


def test_r0_examples():
    assert r0_bound(Fraction(1, 2), 2) == Fraction(3, 5)
    assert r0_bound(0, 2) == Fraction(2, 3)
    # large delta0 limit for linearity 2 is 1/2
    big = r0_bound(Fraction(10**9), 2)
    assert abs(float(big) - 0.5) < 1e-8
    with pytest.raises(ParameterError):
        r0_bound(-1, 2)


def test_p0_examples():
    assert p0_bound(0, 5, 3) == Fraction(5, 2)
    assert p0_bound(Fraction(1, 2), 5, 2) == Fraction(5, 3)
    with pytest.raises(ParameterError):
        p0_bound(0, 3, 3)


def test_witness_point_examples():
    # frozen from candidate enumeration: best level is 7 with 24 box points,
    # 24/7^4 = 0.009995835...
    assert witness_value((2, 0, 0, 0, 0), W5) == pytest.approx(24 / 7**4, rel=1e-14)
    assert witness_value((0, 0, 0, 0, 0), W5) == 10.0


def test_witness_matches_brute_enumeration():
    rng = random.Random(71)
    specs = [W5, WitnessSpec(3, 2, 2, 2), WitnessSpec(2, 3, 3, 1), WitnessSpec(4, 2, 3, 1)]
    for spec in specs:
        for _ in range(12):
            x = tuple(rng.randint(-12, 12) for _ in range(spec.dim))
            want = brute_witness(x, spec.dim, spec.degree, spec.linearity, spec.box_radius)
            assert witness_value(x, spec) == pytest.approx(want, rel=1e-13), (spec, x)


def test_witness_vectorized_matches_scalar():
    rng = np.random.default_rng(5)
    pts = rng.integers(-20, 21, size=(50, 5))
    vals = witness_values(pts, W5)
    for row, v in zip(pts, vals):
        assert witness_value(tuple(int(c) for c in row), W5) == v


def test_witness_lower_bound_property():
    rng = random.Random(19)
    for _ in range(50):
        x = tuple(rng.randint(-30, 30) for _ in range(5))
        if all(c == 0 for c in x):
            continue
        s = sum(c * c for c in x)
        assert witness_value(x, W5) >= (2 * s) ** (-4.0) * (1 - 1e-12)


def test_witness_exact_normalization_mode():
    # the exact mode divides by true joint counts; for (box, delta) it must
    # equal the exact-normalization maximal operator where truncation covers
    # every candidate level
    spec = SphereSpec(5, 2)
    cfg = OperatorConfig(spec, 2, 40, Normalization.EXACT)
    mx = multilinear_maximal([make_box_indicator(5, 1), make_delta(5)], cfg)
    for x in [(0, 0, 0, 0, 0), (1, 1, 0, 0, 0), (2, 0, 0, 0, 0)]:
        assert mx.value(x) == pytest.approx(witness_value(x, W5, exact=True), rel=1e-12)
    # the two normalizations differ by the bounded ratio N(lam)/lam^4
    a = witness_value((3, 1, 0, 0, 0), W5)
    e = witness_value((3, 1, 0, 0, 0), W5, exact=True)
    assert a > 0 and e > 0


def test_witness_agrees_with_truncated_operator():
    # for |x| small enough that every candidate level fits under lambda_max,
    # the closed form equals the generic maximal operator on (box, delta)
    spec = SphereSpec(5, 2)
    box = make_box_indicator(5, 1)
    delta = make_delta(5)
    lam_max = 40
    cfg = OperatorConfig(spec, 2, lam_max, Normalization.ASYMPTOTIC)
    mx = multilinear_maximal([box, delta], cfg)
    for x in [(0, 0, 0, 0, 0), (1, 0, 0, 0, 0), (1, 1, 0, 0, 0), (2, 0, 0, 0, 0), (2, 1, 1, 0, 0)]:
        base = sum(c * c for c in x)
        worst_candidate = base + (sum((abs(c) + 1) ** 2 for c in x) + 5)
        assert worst_candidate <= lam_max  # closed form fully covered
        assert mx.value(x) == pytest.approx(witness_value(x, W5), rel=1e-12)


def test_decay_fit_degree_two():
    report = decay_fit(W5, (1, 0, 0, 0, 0), (10, 2000))
    assert report.expected_slope == -8.0
    assert abs(report.fitted_slope + 8.0) <= 0.2
    assert report.residual < 0.1


def test_decay_fit_degree_three():
    spec = WitnessSpec(dim=5, degree=3, linearity=2, box_radius=1)
    report = decay_fit(spec, (1, 0, 0, 0, 0), (10, 2000))
    assert report.expected_slope == -7.0
    assert abs(report.fitted_slope + 7.0) <= 0.3


def test_decay_fit_diagonal_ray():
    report = decay_fit(W5, (1, 1, 1, 1, 1), (10, 1200))
    assert abs(report.fitted_slope + 8.0) <= 0.2


def test_decay_fit_errors():
    with pytest.raises(ParameterError):
        decay_fit(W5, (0, 0, 0, 0, 0), (10, 2000))
    with pytest.raises(AnalysisError):
        decay_fit(W5, (1, 0, 0, 0, 0), (50, 50))
    with pytest.raises(ParameterError):
        decay_fit(W5, (1, 0, 0, 0, 0), (10, 50))


def test_norm_scan_exact_regions_match_direct_enumeration():
    # small radii fit the exact budget; cross-check against a direct sum
    radii = [3, 5]
    scan = partial_norm_scan(W5, 0.7, radii, exact_budget=10**6)
    assert scan.region_modes == ["exact", "exact"]
    import itertools

    total = 0.0
    for x in itertools.product(range(-3, 4), repeat=5):
        if 0 < sum(c * c for c in x) <= 9 or x == (0,) * 5:
            total += witness_value(x, W5) ** 0.7
    assert scan.partial_norms[0] == pytest.approx(total ** (1 / 0.7), rel=1e-12)
    shell = 0.0
    for x in itertools.product(range(-5, 6), repeat=5):
        if 9 < sum(c * c for c in x) <= 25:
            shell += witness_value(x, W5) ** 0.7
    assert scan.shell_sums[0] == pytest.approx(shell, rel=1e-12)


def test_norm_scan_partial_norms_increase():
    scan = partial_norm_scan(W5, 0.7, [8, 16, 32], samples_per_region=500, seed=3)
    assert scan.partial_norms == sorted(scan.partial_norms)


def test_norm_scan_deterministic_for_fixed_seed():
    a = partial_norm_scan(W5, 0.7, [16, 32, 64], samples_per_region=400, seed=42)
    b = partial_norm_scan(W5, 0.7, [16, 32, 64], samples_per_region=400, seed=42)
    assert a == b
    c = partial_norm_scan(W5, 0.7, [16, 32, 64], samples_per_region=400, seed=43)
    assert c.shell_sums != a.shell_sums


def test_norm_scan_large_r_tail_is_tiny():
    scan = partial_norm_scan(W5, 10.0, [4, 8, 16, 50], exact_budget=10**6,
                             samples_per_region=2000)
    increments = [b - a for a, b in zip(scan.partial_norms, scan.partial_norms[1:])]
    assert all(inc < 1e-6 for inc in increments[1:])


def test_norm_scan_parameter_errors():
    with pytest.raises(ParameterError):
        partial_norm_scan(W5, 0.0, [8, 16])
    with pytest.raises(ParameterError):
        partial_norm_scan(W5, 0.7, [16])
    with pytest.raises(ParameterError):
        partial_norm_scan(W5, 0.7, [16, 8])
    with pytest.raises(ParameterError):
        partial_norm_scan(W5, 0.7, [8, 16], seed=-1)
    with pytest.raises(ParameterError):
        partial_norm_scan(W5, 0.7, [8, 16], samples_per_region=0)


def test_region_examples():
    assert region_classify(2, 2, 1, 5).verdict == "BOUNDED"
    assert region_classify(2, 2, 0.6, 5).verdict == "UNBOUNDED"
    assert region_classify(1, 2, 1, 5).verdict == "UNKNOWN"


def test_region_equality_notes_convention():
    verdict = region_classify(2, 2, Fraction(5, 8), 5)
    assert verdict.verdict == "UNBOUNDED"
    assert "convention" in verdict.reason


def test_region_low_dimensions_unknown():
    assert region_classify(2, 2, 1, 4).verdict == "UNKNOWN"
    assert region_classify(2, 2, 1, 3).verdict == "UNKNOWN"


def test_region_holder_deficient_unknown():
    v = region_classify(4, 4, 1, 5)
    assert v.verdict == "UNKNOWN"
    assert "1/p + 1/q" in v.reason


def test_region_monotone_in_r():
    # raising r never moves a verdict from BOUNDED back to UNBOUNDED
    for p, q in [(2, 2), (1.5, 3), (4, 4), (1, 2)]:
        seen_bounded = False
        for r_num in range(50, 161, 5):
            v = region_classify(p, q, Fraction(r_num, 100), 5).verdict
            if seen_bounded:
                assert v != "UNBOUNDED", (p, q, r_num)
            seen_bounded = seen_bounded or v == "BOUNDED"


def test_region_rejects_bad_exponents():
    with pytest.raises(ParameterError):
        region_classify(0, 2, 1, 5)
    with pytest.raises(ParameterError):
        region_classify(2, 2, -1, 5)
    with pytest.raises(ParameterError):
        region_classify(2, 2, 1, 5, degree=3)
