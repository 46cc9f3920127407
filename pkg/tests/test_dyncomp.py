"""Complexity components against literal definition oracles, targets, lag."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from tslex.discretize import NominalTable
from tslex.dyncomp import (
    DynamicComplexitySeries,
    DynCompConfig,
    TargetVector,
    apply_lag,
    complexity_series_to_csv,
    distribution,
    dynamic_complexity_series,
    fluctuation,
    points_of_return,
    slice_targets,
)
from tslex.ingest import Channel

windows = hnp.arrays(
    np.float64,
    st.integers(2, 40),
    elements=st.floats(-10.0, 10.0, allow_nan=False, width=64),
)


# --- definition oracles, written as plain loops ------------------------------

def return_points_oracle(w):
    def sgn(v):
        return 0 if v == 0 else (1 if v > 0 else -1)

    out = [0]
    for j in range(1, len(w) - 1):
        if sgn(w[j + 1] - w[j]) != sgn(w[j] - w[j - 1]):
            out.append(j)
    out.append(len(w) - 1)
    return out


def fluctuation_oracle(w, domain):
    lo, hi = domain
    d = hi - lo
    if d == 0:
        return 0.0
    w = [min(max(v, lo), hi) for v in w]
    p = return_points_oracle(w)
    total = 0.0
    for k in range(len(p) - 1):
        total += abs(w[p[k + 1]] - w[p[k]]) / ((p[k + 1] - p[k]) * d)
    return total / (len(w) - 1)


def distribution_oracle(w, domain):
    lo, hi = domain
    if hi - lo == 0:
        return 0.0
    w = sorted(min(max(v, lo), hi) for v in w)
    m = len(w)
    ideal = [lo + (hi - lo) * i / (m - 1) for i in range(m)]
    total = 0.0
    terms = 0
    for a in range(m):
        for b in range(a + 1, m):
            for i in range(a, b + 1):
                for j in range(i + 1, b + 1):
                    terms += 1
                    gap_ideal = ideal[j] - ideal[i]
                    gap_seen = w[j] - w[i]
                    if gap_ideal > gap_seen:
                        total += (gap_ideal - gap_seen) / gap_ideal
    score = 1.0 - total / terms
    return min(1.0, max(0.0, score))


# --- turning points -----------------------------------------------------------

def test_return_points_basic():
    np.testing.assert_array_equal(points_of_return([0.0, 4.0, 2.0]), [0, 1, 2])
    np.testing.assert_array_equal(points_of_return([1.0, 2.0, 3.0, 4.0]), [0, 3])
    np.testing.assert_array_equal(points_of_return([5.0, 7.0]), [0, 1])


def test_return_points_plateau_edges():
    np.testing.assert_array_equal(points_of_return([0.0, 1.0, 1.0, 0.0]), [0, 1, 2, 3])
    np.testing.assert_array_equal(points_of_return([2.0, 2.0, 2.0]), [0, 2])


@given(windows)
@settings(max_examples=100, deadline=None)
def test_return_points_match_oracle(w):
    np.testing.assert_array_equal(points_of_return(w), return_points_oracle(list(w)))


# --- fluctuation ----------------------------------------------------------------

def test_fluctuation_anchors():
    dom = (0.0, 4.0)
    assert fluctuation([0.0, 4.0, 2.0], dom) == 0.75
    assert fluctuation(np.full(10, 1.5), dom) == 0.0
    assert fluctuation([0.0, 4.0, 0.0, 4.0, 0.0], dom) == 1.0


def test_fluctuation_clamps_to_domain():
    assert fluctuation([-10.0, 10.0], (0.0, 4.0)) == 1.0


def test_fluctuation_zero_width_domain():
    assert fluctuation([1.0, 2.0, 3.0], (2.0, 2.0)) == 0.0


@given(windows, st.floats(-5.0, 0.0), st.floats(0.5, 5.0))
@settings(max_examples=150, deadline=None)
def test_fluctuation_matches_oracle_and_bounds(w, lo, hi):
    got = fluctuation(w, (lo, hi))
    assert got == pytest.approx(fluctuation_oracle(list(w), (lo, hi)), abs=1e-12)
    assert 0.0 <= got <= 1.0


# --- distribution ---------------------------------------------------------------

def test_distribution_anchors():
    assert distribution([0.0, 0.0, 4.0], (0.0, 4.0)) == pytest.approx(0.6, abs=1e-12)
    assert distribution([0.0, 1.0, 2.0, 3.0, 4.0], (0.0, 4.0)) == 1.0
    assert distribution(np.full(8, 2.0), (0.0, 4.0)) == 0.0


def test_distribution_zero_width_domain():
    assert distribution([1.0, 2.0], (3.0, 3.0)) == 0.0


def test_distribution_order_invariant():
    dom = (0.0, 1.0)
    w = np.array([0.9, 0.1, 0.5, 0.2])
    assert distribution(w, dom) == distribution(np.sort(w), dom)


@given(
    hnp.arrays(np.float64, st.integers(2, 12),
               elements=st.floats(-2.0, 6.0, allow_nan=False, width=64)),
    st.floats(-1.0, 0.0),
    st.floats(0.5, 4.0),
)
@settings(max_examples=150, deadline=None)
def test_distribution_matches_quadruple_sum(w, lo, hi):
    got = distribution(w, (lo, hi))
    assert got == pytest.approx(distribution_oracle(list(w), (lo, hi)), abs=1e-12)
    assert 0.0 <= got <= 1.0


# --- rolling series -------------------------------------------------------------

def test_series_window_layout():
    ch = Channel("c", 5.0, np.arange(100.0))
    out = dynamic_complexity_series(ch, DynCompConfig(window=30, step=1), "r")
    assert out.start_times.size == 71
    assert out.start_times[0] == 0.0
    assert out.start_times[1] == pytest.approx(0.2)
    np.testing.assert_allclose(out.complexity, out.fluctuation * out.distribution)
    assert out.domain == (0.0, 99.0)


def test_series_step():
    ch = Channel("c", 2.0, np.arange(20.0))
    out = dynamic_complexity_series(ch, DynCompConfig(window=8, step=4), "r")
    assert out.start_times.size == 4
    np.testing.assert_allclose(out.start_times, [0.0, 2.0, 4.0, 6.0])


def test_series_matches_direct_calls():
    rng = np.random.default_rng(3)
    vals = rng.normal(size=60)
    ch = Channel("c", 1.0, vals)
    out = dynamic_complexity_series(ch, DynCompConfig(window=10, step=3), "r")
    dom = (vals.min(), vals.max())
    for k in range(out.start_times.size):
        w = vals[3 * k : 3 * k + 10]
        assert out.fluctuation[k] == fluctuation(w, dom)
        assert out.distribution[k] == distribution(w, dom)


def test_series_degenerate_domain():
    ch = Channel("c", 1.0, np.full(40, 3.0))
    out = dynamic_complexity_series(ch, DynCompConfig(window=10), "r")
    assert out.degenerate_domain
    assert not out.complexity.any()


def test_series_fixed_domain():
    ch = Channel("c", 1.0, np.array([0.0, 4.0, 2.0, 1.0, 3.0]))
    out = dynamic_complexity_series(ch, DynCompConfig(window=5, domain=(0.0, 8.0)), "r")
    assert out.domain == (0.0, 8.0)
    assert out.fluctuation[0] == fluctuation(ch.values, (0.0, 8.0))


def test_series_too_short():
    with pytest.raises(ValueError, match="window"):
        dynamic_complexity_series(Channel("c", 1.0, np.arange(5.0)), DynCompConfig(window=30))


def test_config_validation():
    with pytest.raises(ValueError):
        DynCompConfig(window=3)
    with pytest.raises(ValueError):
        DynCompConfig(step=0)
    with pytest.raises(ValueError):
        DynCompConfig(domain=(2.0, 1.0))


# --- slice targets ---------------------------------------------------------------

def fake_series(rid, comp, times):
    comp = np.asarray(comp, dtype=np.float64)
    times = np.asarray(times, dtype=np.float64)
    return DynamicComplexitySeries(
        recording_id=rid, channel_id="x", start_times=times,
        fluctuation=comp, distribution=np.ones_like(comp), complexity=comp,
        window=4, step=1, domain=(0.0, 1.0))


def test_mean_z_target():
    s1 = fake_series("a", [0.2, 0.4, 0.8, 1.0], [0.0, 0.5, 1.0, 1.5])
    s2 = fake_series("b", [0.0, 0.2, 0.6, 0.6], [0.0, 0.5, 1.0, 1.5])
    out = slice_targets({"a": s1, "b": s2}, {"a": 2, "b": 2}, 1.0, "mean_z")
    assert out.rows == [("a", 0), ("a", 1), ("b", 0), ("b", 1)]
    means = np.array([0.3, 0.9, 0.1, 0.6])
    want = (means - means.mean()) / means.std()
    np.testing.assert_allclose(out.values, want)
    assert out.values.mean() == pytest.approx(0.0, abs=1e-12)
    assert out.values.std() == pytest.approx(1.0)
    assert not out.degenerate


def test_mean_z_degenerate():
    s = fake_series("a", [0.5, 0.5], [0.0, 1.0])
    out = slice_targets({"a": s}, {"a": 2}, 1.0, "mean_z")
    np.testing.assert_array_equal(out.values, [0.0, 0.0])
    assert out.degenerate
    assert any("zero variance" in w for w in out.warnings)


def test_slope_target():
    ## complexity rises by 0.1 per second inside each slice
    times = np.array([0.0, 0.5, 1.0, 1.5])
    s = fake_series("a", 0.1 * times, times)
    out = slice_targets({"a": s}, {"a": 2}, 1.0, "slope")
    np.testing.assert_allclose(out.values, [0.1, 0.1])


def test_delta_target_drops_first_slice():
    s = fake_series("a", [0.2, 0.2, 0.5, 0.5, 0.3, 0.3],
                    [0.0, 0.5, 1.0, 1.5, 2.0, 2.5])
    out = slice_targets({"a": s}, {"a": 3}, 1.0, "delta")
    assert out.rows == [("a", 1), ("a", 2)]
    np.testing.assert_allclose(out.values, [0.3, -0.2])


def test_windows_beyond_last_slice_ignored():
    s = fake_series("a", [0.1, 0.9, 0.9], [0.0, 0.5, 1.2])
    out = slice_targets({"a": s}, {"a": 1}, 1.0, "mean_z")
    assert out.rows == [("a", 0)]


def test_empty_slice_is_an_error():
    s = fake_series("a", [0.1, 0.2], [0.0, 2.5])
    with pytest.raises(ValueError, match="slice 1"):
        slice_targets({"a": s}, {"a": 3}, 1.0, "mean_z")


def test_slope_needs_two_points():
    s = fake_series("a", [0.1, 0.2], [0.0, 1.0])
    with pytest.raises(ValueError, match="slope"):
        slice_targets({"a": s}, {"a": 2}, 1.0, "slope")


def test_unknown_kind():
    s = fake_series("a", [0.1, 0.2], [0.0, 0.5])
    with pytest.raises(ValueError, match="kind"):
        slice_targets({"a": s}, {"a": 1}, 1.0, "median")


# --- lag alignment ----------------------------------------------------------------

def full_table(rids, n_slices):
    rows = [(rid, i) for rid in rids for i in range(n_slices)]
    labels = np.zeros((len(rows), 1), dtype=np.int8)
    return NominalTable(rows=rows, columns=["f"], labels=labels)


def full_target(rids, n_slices):
    rows = [(rid, i) for rid in rids for i in range(n_slices)]
    values = np.array([10.0 * r + i for r, rid in enumerate(rids) for i in range(n_slices)])
    return TargetVector(rows=rows, values=values, kind="mean_z")


def test_lag_zero_is_identity():
    table = full_table(["a", "b"], 4)
    target = full_target(["a", "b"], 4)
    t2, g2 = apply_lag(table, target, 0)
    assert t2.rows == table.rows
    np.testing.assert_array_equal(g2.values, target.values)
    assert g2.lag == 0


def test_lag_removes_exactly_lag_rows_per_recording():
    table = full_table(["a", "b", "c"], 5)
    target = full_target(["a", "b", "c"], 5)
    for lag in (1, 2, 3):
        t2, g2 = apply_lag(table, target, lag)
        assert len(t2.rows) == 3 * (5 - lag)
        for rid in ("a", "b", "c"):
            kept = [i for r, i in t2.rows if r == rid]
            assert kept == list(range(5 - lag))
        assert g2.lag == lag


def test_lag_pairs_feature_row_with_later_target():
    table = full_table(["a"], 4)
    target = full_target(["a"], 4)
    _, g2 = apply_lag(table, target, 2)
    ## feature slice i carries the target of slice i + 2
    np.testing.assert_array_equal(g2.values, [2.0, 3.0])
    assert g2.rows == [("a", 0), ("a", 1)]


def test_lag_with_gappy_table():
    table = full_table(["a"], 5)
    table = NominalTable(rows=[table.rows[i] for i in (0, 2, 4)],
                         columns=table.columns, labels=table.labels[[0, 2, 4]])
    target = full_target(["a"], 5)
    t2, g2 = apply_lag(table, target, 1)
    assert t2.rows == [("a", 0), ("a", 2)]
    np.testing.assert_array_equal(g2.values, [1.0, 3.0])


def test_lag_errors():
    table = full_table(["a"], 3)
    target = full_target(["a"], 3)
    with pytest.raises(ValueError, match="non-negative"):
        apply_lag(table, target, -1)
    with pytest.raises(ValueError, match="slice count"):
        apply_lag(table, target, 3)


# --- CSV export --------------------------------------------------------------------

def test_complexity_csv(tmp_path):
    s = fake_series("a", [0.25, 0.5], [0.0, 1.0])
    out = tmp_path / "c.csv"
    complexity_series_to_csv([s], str(out))
    lines = out.read_text().splitlines()
    assert lines[0] == "recording_id,window_start_s,F,D,complexity"
    assert lines[1] == "a,0.0,0.25,1.0,0.25"
    assert len(lines) == 3
