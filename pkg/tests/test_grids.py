import io
import math
import random

import pytest

from spherelab import (
    BudgetError,
    GridFunction,
    ParameterError,
    SphereSpec,
    lp_norm,
    make_box_indicator,
    make_delta,
    read_grid_text,
    rep_counts,
    slice_family,
    translate,
    write_grid_text,
)
from spherelab.grids import add, pointwise_mul, scale


def random_function(rng, dim, size=6, span=4):
    vals = {}
    while len(vals) < size:
        p = tuple(rng.randint(-span, span) for _ in range(dim))
        vals[p] = rng.uniform(-2, 2)
    return GridFunction(dim, vals)


def test_delta_basics():
    d = make_delta(3)
    assert d.support_size() == 1
    assert d.value((0, 0, 0)) == 1.0
    assert d.value((1, 0, 0)) == 0.0
    assert d.mass() == 1.0


def test_box_sizes():
    assert make_box_indicator(2, 1).support_size() == 9
    assert make_box_indicator(5, 1).support_size() == 243
    assert make_box_indicator(1, 0) == make_delta(1)


def test_box_budget():
    with pytest.raises(BudgetError):
        make_box_indicator(5, 1, budget=100)


def test_zero_values_dropped_and_bbox_tight():
    f = GridFunction(2, {(0, 0): 1.0, (3, -1): 0.0, (1, 2): -0.5})
    assert f.support_size() == 2
    assert f.bbox == ((0, 0), (1, 2))
    z = GridFunction(2, {})
    assert z.is_zero() and z.bbox is None


def test_immutability():
    f = make_delta(2)
    with pytest.raises(AttributeError):
        f.dim = 3
    with pytest.raises(TypeError):
        f.values[(0, 0)] = 2.0


def test_dimension_validation():
    with pytest.raises(ParameterError):
        GridFunction(2, {(1, 2, 3): 1.0})
    with pytest.raises(ParameterError):
        add(make_delta(2), make_delta(3))


def test_lp_norms():
    box = make_box_indicator(2, 1)
    assert lp_norm(box, 1) == 9.0
    assert lp_norm(box, 2) == 3.0
    assert lp_norm(make_delta(4), 0.5) == 1.0
    with pytest.raises(ParameterError):
        lp_norm(box, 0.0)


def test_lp_nesting_property():
    rng = random.Random(11)
    for _ in range(20):
        f = random_function(rng, 2)
        p = rng.uniform(0.3, 3.0)
        p_bigger = p + rng.uniform(0.1, 2.0)
        assert lp_norm(f, p_bigger) <= lp_norm(f, p) + 1e-12


def test_slice_family_delta_gives_shell_indicators():
    spec = SphereSpec(2, 2)
    fam = slice_family(make_delta(2), spec, 8)
    table = rep_counts(spec, 8)
    for mu in range(9):
        sl = fam.slice(mu)
        assert sl.support_size() == table.count(mu)
        assert all(v == 1.0 for _, v in sl.items_sorted())
        assert all(p[0] ** 2 + p[1] ** 2 == mu for p, _ in sl.items_sorted())


def test_slice_family_interval_example():
    fam = slice_family(make_box_indicator(1, 1), SphereSpec(1, 2), 1)
    assert fam.slice(0) == make_box_indicator(1, 1)
    f1 = fam.slice(1)
    assert [f1.value((x,)) for x in range(-2, 3)] == [1.0, 1.0, 2.0, 1.0, 1.0]


def test_slice_mass_bookkeeping():
    spec = SphereSpec(2, 2)
    rng = random.Random(3)
    f = random_function(rng, 2)
    table = rep_counts(spec, 10)
    fam = slice_family(f, spec, 10)
    for mu in range(11):
        assert fam.slice(mu).mass() == pytest.approx(table.count(mu) * f.mass(), rel=1e-12)


def test_slice_support_inside_dilated_bbox():
    spec = SphereSpec(2, 2)
    f = make_box_indicator(2, 1)
    fam = slice_family(f, spec, 9)
    for mu in range(10):
        radius = math.isqrt(mu)
        for p, _ in fam.slice(mu).items_sorted():
            assert all(abs(c) <= 1 + radius for c in p)


def test_slice_family_linearity():
    spec = SphereSpec(2, 2)
    rng = random.Random(5)
    f = random_function(rng, 2)
    g = random_function(rng, 2)
    combo = add(scale(f, 1.7), scale(g, -0.4))
    fam_combo = slice_family(combo, spec, 6)
    fam_f = slice_family(f, spec, 6)
    fam_g = slice_family(g, spec, 6)
    for mu in range(7):
        want = add(scale(fam_f.slice(mu), 1.7), scale(fam_g.slice(mu), -0.4))
        got = fam_combo.slice(mu)
        keys = set(got.values) | set(want.values)
        for key in keys:
            assert got.value(key) == pytest.approx(want.value(key), rel=1e-12, abs=1e-12)


def test_slice_family_translation():
    spec = SphereSpec(2, 2)
    rng = random.Random(9)
    f = random_function(rng, 2)
    shifted = translate(f, (2, -3))
    fam = slice_family(f, spec, 5)
    fam_shifted = slice_family(shifted, spec, 5)
    for mu in range(6):
        assert fam_shifted.slice(mu) == translate(fam.slice(mu), (2, -3))


def test_slice_budget_error_names_level():
    f = make_box_indicator(2, 2)
    with pytest.raises(BudgetError, match="mu="):
        slice_family(f, SphereSpec(2, 2), 50, work_budget=100)


def test_pointwise_mul():
    f = GridFunction(1, {(0,): 2.0, (1,): 3.0})
    g = GridFunction(1, {(1,): 4.0, (2,): 5.0})
    assert pointwise_mul(f, g) == GridFunction(1, {(1,): 12.0})


def test_text_format_round_trip():
    rng = random.Random(13)
    f = random_function(rng, 3)
    buf = io.StringIO()
    write_grid_text(f, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "3"
    g = read_grid_text(io.StringIO(text))
    assert g == f
    # rows are lexicographically sorted
    rows = [tuple(int(c) for c in line.split()[:3]) for line in text.splitlines()[1:]]
    assert rows == sorted(rows)


def test_text_format_rejects_garbage():
    with pytest.raises(ParameterError):
        read_grid_text(io.StringIO("not-a-dim\n"))
    with pytest.raises(ParameterError):
        read_grid_text(io.StringIO("2\n1 2 3 4\n"))
