"""Time-varying LMS step size from a windowed autocorrelation estimate.

The step size at time t is set from the trace of R = D^T D, where D stacks
the J+1 most recent length-L input windows:

    D(t)[i] = [x(t-i), x(t-i-1), ..., x(t-i-L+1)],   i = 0..J

Before ``switch_threshold`` iterations the fast rule 1/(3 trace R) is used,
afterwards the slower M/trace R.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ShapeError

DEFAULT_SWITCH_THRESHOLD = 15_000


@dataclass(frozen=True)
class LrSchedule:
    """Step-size schedule. J defaults to 500 samples (1 s at 500 Hz): much shorter
    windows make the trace follow single pulses and the filter behave like a
    normalized LMS that shrinks toward zero between beats."""

    window_size: int = 500
    misadjustment: float = 1e-5
    switch_threshold: int = DEFAULT_SWITCH_THRESHOLD
    delay_length: int = 1

    def __post_init__(self):
        if int(self.window_size) != self.window_size or self.window_size < 0:
            raise ConfigError(f"window size J must be a non-negative integer, got {self.window_size!r}")
        if int(self.delay_length) != self.delay_length or self.delay_length < 1:
            raise ConfigError(f"delay length L must be a positive integer, got {self.delay_length!r}")
        if int(self.switch_threshold) != self.switch_threshold or self.switch_threshold < 0:
            raise ConfigError(f"switch threshold must be a non-negative integer, got {self.switch_threshold!r}")
        if not self.misadjustment > 0:
            raise ConfigError(f"misadjustment M must be positive, got {self.misadjustment!r}")
        if self.misadjustment >= 1 / 3:
            warnings.warn(f"misadjustment M={self.misadjustment} >= 1/3: the late-phase rate is not "
                          "slower than the early one", RuntimeWarning, stacklevel=3)

    def with_delay_length(self, L: int) -> "LrSchedule":
        return LrSchedule(self.window_size, self.misadjustment, self.switch_threshold, L)


@dataclass(frozen=True)
class DelayMatrix:
    rows: np.ndarray  # shape (J+1, L)

    @property
    def window_size(self) -> int:
        return self.rows.shape[0] - 1

    @property
    def delay_length(self) -> int:
        return self.rows.shape[1]


def build_delay_matrix(recent, L: int, J: int) -> DelayMatrix:
    """Build D(t) from the last J+L samples, given oldest first (``recent[-1]`` is x(t))."""
    recent = np.asarray(recent, dtype=np.float64)
    if L < 1 or J < 0:
        raise ShapeError(f"need L >= 1 and J >= 0, got L={L}, J={J}")
    if recent.shape != (J + L,):
        raise ShapeError(f"delay matrix with L={L}, J={J} needs {J + L} samples, got {recent.shape}")
    newest_first = recent[::-1]
    rows = np.lib.stride_tricks.sliding_window_view(newest_first, L)[: J + 1].copy()
    return DelayMatrix(rows)


def correlation_trace(D: DelayMatrix) -> float:
    # trace(D^T D) is the sum of squared entries of D
    rows = D.rows
    return float(np.sum(rows * rows))


def learning_rate(trace: float, iteration: int, schedule: LrSchedule) -> float:
    """Step size for one iteration; a zero trace gives a zero step."""
    if trace <= 0:
        return 0.0
    if iteration < schedule.switch_threshold:
        return 1.0 / (3.0 * trace)
    return schedule.misadjustment / trace


def trace_series(x, L: int, J: int) -> np.ndarray:
    """trace(D(t)^T D(t)) for every t, with history before the first sample taken as zero.

    Each x(t-m)^2 enters D(t) once per (i, k) with i + k = m, so the whole
    series is x^2 convolved with the product of a length-(J+1) and a
    length-L box.
    """
    x = np.asarray(x, dtype=np.float64)
    kernel = np.convolve(np.ones(J + 1), np.ones(L))
    with np.errstate(over="ignore"):
        return np.convolve(x * x, kernel)[: x.shape[0]]


def learning_rate_series(x, schedule: LrSchedule, first_step: int | None = None) -> np.ndarray:
    """Per-step learning rates for an LMS run over reference ``x``.

    Step n (n = 0, 1, ...) happens at sample t = first_step + n, where
    first_step defaults to L-1. Steps taken before J+L samples exist always
    use the early rule, whatever the threshold.
    """
    L, J = schedule.delay_length, schedule.window_size
    if first_step is None:
        first_step = L - 1
    traces = trace_series(x, L, J)[first_step:]
    steps = np.arange(traces.shape[0])
    t = steps + first_step
    late = (steps >= schedule.switch_threshold) & (t + 1 >= J + L)
    lr = np.zeros_like(traces)
    positive = traces > 0
    early = positive & ~late
    lr[early] = 1.0 / (3.0 * traces[early])
    lr[positive & late] = schedule.misadjustment / traces[positive & late]
    return lr
