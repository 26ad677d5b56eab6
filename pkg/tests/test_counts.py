import io
import random

import pytest

from spherelab import (
    AnalysisError,
    ParameterError,
    RangeError,
    SphereSpec,
    TableCache,
    enumerate_shell,
    growth_exponent_fit,
    joint_count,
    joint_count_by_folding,
    rep_counts,
)
from spherelab._convolve import convolve_trunc
from spherelab.counts import kth_root_floor, write_counts_csv, write_shell_csv

from oracles import brute_count, brute_shell


def test_one_dim_squares_table():
    table = rep_counts(SphereSpec(1, 2), 4)
    assert list(table.counts) == [1, 2, 0, 0, 2]


def test_two_squares_25():
    assert rep_counts(SphereSpec(2, 2), 25).count(25) == 12


def test_four_squares_2():
    assert rep_counts(SphereSpec(4, 2), 2).count(2) == 24


def test_two_cubes_9():
    assert rep_counts(SphereSpec(2, 3), 9).count(9) == 8


@pytest.mark.parametrize("dim", [1, 2, 3])
@pytest.mark.parametrize("degree", [2, 3, 4])
def test_counts_match_brute_force(dim, degree):
    table = rep_counts(SphereSpec(dim, degree), 80)
    for lam in range(81):
        assert table.count(lam) == brute_count(dim, degree, lam), (dim, degree, lam)


def test_counts_zero_entry_and_sign_parity():
    table = rep_counts(SphereSpec(3, 2), 500)
    assert table.count(0) == 1
    for mu in range(1, 501):
        assert table.count(mu) % 2 == 0


def test_convolution_identity_random_splits():
    lam_max = 2000
    rng = random.Random(7)
    for degree in (2, 3):
        tables = {m: list(rep_counts(SphereSpec(m, degree), lam_max).counts) for m in range(1, 9)}
        for _ in range(10):
            a = rng.randint(1, 7)
            b = rng.randint(1, 8 - a)
            assert convolve_trunc(tables[a], tables[b], lam_max + 1) == tables[a + b]


def test_parameter_errors():
    with pytest.raises(ParameterError):
        SphereSpec(0, 2)
    with pytest.raises(ParameterError):
        SphereSpec(2, 1)
    with pytest.raises(ParameterError):
        rep_counts(SphereSpec(2, 2), -1)


def test_joint_count_matches_examples():
    assert joint_count(SphereSpec(2, 2), 2, 2) == 24
    assert joint_count(SphereSpec(3, 2), 2, 0) == 1
    assert joint_count(SphereSpec(5, 2), 2, 1) == 20


def test_joint_count_paths_agree():
    cache = TableCache()
    for dim, degree, ell in [(1, 2, 2), (2, 2, 3), (2, 3, 2), (3, 2, 2)]:
        spec = SphereSpec(dim, degree)
        for lam in range(0, 40):
            assert joint_count(spec, ell, lam, cache) == joint_count_by_folding(
                spec, ell, lam, cache
            ), (dim, degree, ell, lam)


def test_joint_count_range_error():
    with pytest.raises(RangeError):
        joint_count(SphereSpec(2, 2), 2, -3)


def test_kth_root_floor_exact():
    for k in (2, 3, 4, 5):
        for m in range(0, 3000):
            r = kth_root_floor(m, k)
            assert r**k <= m < (r + 1) ** k


def test_shell_examples():
    shell = enumerate_shell(SphereSpec(2, 2), 25)
    assert len(shell.points) == 12
    expected = {(5, 0), (0, 5), (3, 4), (4, 3)}
    signed = {
        (sx * a, sy * b)
        for (a, b) in expected
        for sx in (-1, 1)
        for sy in (-1, 1)
    }
    assert set(shell.points) == signed
    assert enumerate_shell(SphereSpec(3, 2), 0).points == ((0, 0, 0),)
    assert enumerate_shell(SphereSpec(2, 2), 3).points == ()


def test_shell_is_sorted_and_matches_brute():
    for dim, degree, lam in [(2, 2, 25), (3, 2, 11), (2, 3, 9), (3, 3, 17), (1, 4, 16)]:
        shell = enumerate_shell(SphereSpec(dim, degree), lam)
        assert list(shell.points) == brute_shell(dim, degree, lam)
        assert list(shell.points) == sorted(shell.points)


def test_shell_length_equals_count():
    table = rep_counts(SphereSpec(3, 2), 60)
    for lam in range(61):
        assert len(enumerate_shell(SphereSpec(3, 2), lam).points) == table.count(lam)


def test_shell_symmetry_under_signs_and_permutations():
    shell = set(enumerate_shell(SphereSpec(3, 2), 14).points)
    assert shell  # 1+4+9
    for p in shell:
        assert tuple(-c for c in p) in shell
        assert (p[1], p[0], p[2]) in shell
        assert (p[2], p[1], p[0]) in shell


def test_growth_fit_dimension_six_small():
    # composed dimension 6 at modest lambda already fits slope 2 loosely
    table = rep_counts(SphereSpec(6, 2), 2**14)
    report = growth_exponent_fit(table, (2**8, 2**14))
    assert report.expected_slope == 2.0
    assert abs(report.fitted_slope - 2.0) <= 0.1


def test_growth_fit_rejects_narrow_window():
    table = rep_counts(SphereSpec(2, 2), 100)
    with pytest.raises(ParameterError):
        growth_exponent_fit(table, (5, 9))


def test_growth_fit_zero_block_is_analysis_error():
    # dimension 1: the block [2, 4) contains no squares
    table = rep_counts(SphereSpec(1, 2), 64)
    with pytest.raises(AnalysisError):
        growth_exponent_fit(table, (2, 32))


def test_counts_csv_format():
    table = rep_counts(SphereSpec(2, 2), 3)
    buf = io.StringIO()
    write_counts_csv(table, buf)
    assert buf.getvalue() == "lambda,count\n0,1\n1,4\n2,4\n3,0\n"


def test_shell_csv_format():
    shell = enumerate_shell(SphereSpec(2, 2), 1)
    buf = io.StringIO()
    write_shell_csv(shell, buf)
    assert buf.getvalue() == "x1,x2\n-1,0\n0,-1\n0,1\n1,0\n"


def test_counts_are_ints_everywhere():
    table = rep_counts(SphereSpec(10, 2), 50)
    assert all(isinstance(c, int) for c in table.counts)
    # dimension 10 counts grow fast but stay exact
    assert table.count(50) == sum(
        rep_counts(SphereSpec(5, 2), 50).count(nu)
        * rep_counts(SphereSpec(5, 2), 50).count(50 - nu)
        for nu in range(51)
    )
