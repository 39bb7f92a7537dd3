import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fetalsep.cascade import CascadeConfig
from fetalsep.errors import MetricError, ShapeError
from fetalsep.metrics import SweepRow, accuracy, format_sweep_table, run_sweep, write_sweep_csv
from fetalsep.signal import Signal


def test_identical_is_zero():
    x = np.random.default_rng(0).standard_normal(100)
    assert accuracy(x, x) == 0.0


@pytest.mark.parametrize("c", [0.3, -2.0])
def test_constant_offset(c):
    x = np.random.default_rng(1).standard_normal(1000)
    assert accuracy(x + c, x) == pytest.approx(abs(c) / np.std(x), rel=1e-9)


def test_double_of_zero_mean_target():
    x = np.sin(np.linspace(0, 20 * np.pi, 4000, endpoint=False))
    assert accuracy(2 * x, x) == pytest.approx(1.0, rel=1e-12)


def test_errors():
    with pytest.raises(ShapeError):
        accuracy(np.ones(3), np.ones(4))
    with pytest.raises(MetricError):
        accuracy(np.ones(3), np.ones(3))
    with pytest.raises(ShapeError):
        accuracy(np.ones(0), np.ones(0))


def test_accepts_signals():
    s = Signal(np.arange(10.0))
    assert accuracy(s, s) == 0.0


vectors = st.lists(st.floats(-1e3, 1e3), min_size=5, max_size=60)


@given(vectors, st.data())
@settings(max_examples=100, deadline=None)
def test_sign_symmetry(target, data):
    t = np.array(target)
    if np.var(t) < 1e-6:
        return
    d = np.array(data.draw(st.lists(st.floats(-1e3, 1e3), min_size=len(t), max_size=len(t))))
    assert accuracy(t + d, t) == pytest.approx(accuracy(t - d, t), rel=1e-9)


@given(vectors, st.floats(-1e3, 1e3))
@settings(max_examples=100, deadline=None)
def test_common_offset_invariance(target, c):
    t = np.array(target)
    if np.var(t) < 1e-3:
        return
    r = t[::-1].copy()
    assert accuracy(r + c, t + c) == pytest.approx(accuracy(r, t), rel=1e-6, abs=1e-9)


def test_tail_rule_small():
    t = np.array([5.0, 1.0, 2.0, 3.0])
    r = np.array([100.0, 1.0, 2.0, 4.0])
    # only the last 3 samples count with tail=3
    expected = math.sqrt((1.0 / 3) / np.var([1.0, 2.0, 3.0]))
    assert accuracy(r, t, tail=3) == pytest.approx(expected, rel=1e-12)
    assert accuracy(r, t, tail=10) == accuracy(r, t, tail=4)


def test_non_finite_result_scores_inf():
    t = np.arange(10.0)
    r = t.copy()
    r[5] = np.inf
    assert accuracy(r, t) == math.inf


def test_sweep_single_row_regression(default_synth):
    rec, child, _ = default_synth
    rows = run_sweep(rec, child, [1], [1e-5], [5])
    assert len(rows) == 1
    row = rows[0]
    assert (row.L, row.M, row.J) == (1, 1e-5, 5)
    assert math.isfinite(row.accuracy)
    assert row.accuracy == pytest.approx(0.9866683471600934, rel=1e-6)


def test_sweep_diverging_stage1_gives_inf(default_synth):
    rec, child, _ = default_synth
    rows = run_sweep(rec, child, [10], [1e-5], [1], CascadeConfig(stage1_lr=1e6))
    assert rows[0].accuracy == math.inf
    assert rows[0].cells() == ["10", "1e-05", "1", "inf"]


def test_sweep_empty_grid(default_synth):
    rec, child, _ = default_synth
    with pytest.raises(ValueError):
        run_sweep(rec, child, [], [1e-5], [1])


def test_sweep_order_and_parallel_match(default_synth):
    rec, child, _ = default_synth
    short = rec  # full length keeps the tail rule meaningful
    serial = run_sweep(short, child, [1, 2], [1e-5, 1e-7], [1, 2])
    assert [(r.L, r.M, r.J) for r in serial] == [(1, 1e-5, 1), (1, 1e-5, 2), (1, 1e-7, 1), (1, 1e-7, 2),
                                                 (2, 1e-5, 1), (2, 1e-5, 2), (2, 1e-7, 1), (2, 1e-7, 2)]
    parallel = run_sweep(short, child, [1, 2], [1e-5, 1e-7], [1, 2], workers=2)
    assert serial == parallel


def test_table_rendering():
    rows = [SweepRow(1, 1e-5, 5, 1.2631), SweepRow(10, 1e-7, 1, math.inf)]
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    assert buf.getvalue() == "L,M,J,accuracy\n1,1e-05,5,1.2631\n10,1e-07,1,inf\n"
    table = format_sweep_table(rows).splitlines()
    assert table[0].split() == ["L", "M", "J", "accuracy"]
    assert table[-1].split() == ["10", "1e-07", "1", "inf"]
    assert len({len(line) for line in table}) == 1
