"""Normalized RMS error and the (L, M, J) parameter sweep."""
from __future__ import annotations

import csv
import itertools
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from .cascade import CascadeConfig, run_stage1, run_stage2
from .errors import IoError, MetricError, ShapeError
from .schedule import LrSchedule
from .signal import Recording, Signal, format_float

DEFAULT_TAIL = 75_000


def accuracy(result, target, tail: int = DEFAULT_TAIL) -> float:
    """RMS of ``result - target`` over the last ``tail`` samples, divided by the target's std there.

    0 is a perfect match; 1 is what a zero-mean target scores against 2x
    itself. The variance is the population variance of the same tail.
    """
    r = result.samples if isinstance(result, Signal) else np.asarray(result, dtype=np.float64)
    t = target.samples if isinstance(target, Signal) else np.asarray(target, dtype=np.float64)
    if r.shape != t.shape or r.ndim != 1:
        raise ShapeError(f"result and target shapes differ: {r.shape} vs {t.shape}")
    if r.shape[0] == 0:
        raise ShapeError("cannot score empty signals")
    if tail < 1:
        raise ValueError(f"tail must be positive, got {tail}")
    r, t = r[-tail:], t[-tail:]
    var = float(np.var(t))
    if not var > 0:
        raise MetricError("target has zero variance over the scored tail")
    with np.errstate(over="ignore", invalid="ignore"):
        diff = r - t
        mse = float(np.mean(diff * diff))
    return math.sqrt(mse / var) if not math.isnan(mse) else math.inf


@dataclass(frozen=True)
class SweepRow:
    L: int
    M: float
    J: int
    accuracy: float  # math.inf for diverged or non-finite runs

    @property
    def diverged(self) -> bool:
        return math.isinf(self.accuracy)

    def cells(self) -> list[str]:
        acc = "inf" if self.diverged else format_float(self.accuracy)
        return [str(self.L), format_float(self.M), str(self.J), acc]


def _sweep_row(args):
    e_a, e_b, target, stage1_diverged, L, M, J, config, tail = args
    schedule = LrSchedule(J, M, config.stage2_schedule.switch_threshold, L)
    result = run_stage2(e_a, e_b, L, schedule)
    if stage1_diverged or result.diverged:
        return SweepRow(L, M, J, math.inf)
    score = accuracy(result.prediction, target, tail)
    return SweepRow(L, M, J, score if math.isfinite(score) else math.inf)


def run_sweep(recording: Recording, target: Signal, L_values: Sequence[int], M_values: Sequence[float],
              J_values: Sequence[int], base_config: CascadeConfig | None = None,
              tail: int = DEFAULT_TAIL, workers: int = 1) -> list[SweepRow]:
    """Score the cascade for every (L, M, J), L outermost and J innermost.

    Only the second stage depends on the grid, so the first stage runs once.
    A diverging configuration yields an ``inf`` row instead of an error.
    """
    if not (len(L_values) and len(M_values) and len(J_values)):
        raise ValueError("every grid list must be non-empty")
    config = base_config or CascadeConfig()
    config.validate(recording)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for M in M_values:
            LrSchedule(1, M)  # fail on a bad M before any filtering
    e_a, e_b, stage1_diverged = run_stage1(recording, config)
    jobs = [(e_a, e_b, target, stage1_diverged, int(L), float(M), int(J), config, tail)
            for L, M, J in itertools.product(L_values, M_values, J_values)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(_sweep_row, jobs))
        return [_sweep_row(job) for job in jobs]


SWEEP_HEADER = ["L", "M", "J", "accuracy"]


def write_sweep_csv(rows: Sequence[SweepRow], sink: TextIO) -> None:
    try:
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        for row in rows:
            writer.writerow(row.cells())
    except OSError as exc:
        raise IoError(f"failed to write sweep table: {exc}") from exc


def format_sweep_table(rows: Sequence[SweepRow]) -> str:
    body = [row.cells() for row in rows]
    widths = [max(len(h), *(len(r[i]) for r in body)) if body else len(h) for i, h in enumerate(SWEEP_HEADER)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(SWEEP_HEADER, widths)),
             "  ".join("-" * w for w in widths)]
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in body]
    return "\n".join(lines) + "\n"
