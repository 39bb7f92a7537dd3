"""Single-channel LMS adaptive noise canceller.

The reference input (a chest lead) is filtered by an L-tap weight vector to
predict the maternal interference in the primary input (an abdomen lead);
the prediction error is the child estimate:

    noise(t) = W . [x(t), x(t-1), ..., x(t-L+1)]
    child(t) = primary(t) - noise(t)
    W       <- W + 2 lr child(t) [x(t), ..., x(t-L+1)]

Windows are always newest-first, so W[0] weights the current reference
sample.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DivergedError, ShapeError
from .schedule import LrSchedule, learning_rate_series
from .signal import Signal

DEFAULT_FIXED_LR = 600.0


@dataclass(frozen=True, eq=False)
class FilterState:
    weights: np.ndarray
    iteration: int = 0
    diverged: bool = False

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.shape[0] < 1:
            raise ShapeError(f"weights must be a non-empty vector, got shape {w.shape}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def zeros(cls, L: int) -> "FilterState":
        if L < 1:
            raise ShapeError(f"delay length must be >= 1, got {L}")
        return cls(np.zeros(L))

    @property
    def delay_length(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class StepOutput:
    prediction: float
    child: float
    state: FilterState


@dataclass(frozen=True, eq=False)
class ExtractionResult:
    """Output of any separator in the package.

    ``child`` is the fetal estimate. LMS runs also carry the filter
    ``prediction`` (maternal estimate), the per-step ``lr_trace`` and final
    ``weights``; the cascade adds the two first-stage outputs; the spectral
    separator lists windows whose child peak was weak.
    """

    child: Signal
    lr_trace: np.ndarray = field(default_factory=lambda: np.zeros(0))
    diverged: bool = False
    stage1_outputs: tuple[Signal, ...] = ()
    prediction: Signal | None = None
    weights: np.ndarray | None = None
    diverged_at: int | None = None
    low_confidence_windows: tuple[int, ...] = ()


def lms_step(state: FilterState, reference_window, primary_sample: float, lr: float) -> StepOutput:
    """One predict/subtract/update step.

    If the prediction, the error or any updated weight comes out non-finite,
    the returned state is marked diverged and keeps the previous weights.
    """
    if state.diverged:
        raise DivergedError("filter has diverged; start a new state")
    window = np.asarray(reference_window, dtype=np.float64)
    if window.shape != state.weights.shape:
        raise ShapeError(f"reference window has shape {window.shape}, expected {state.weights.shape}")
    if lr < 0:
        raise ValueError(f"learning rate must be non-negative, got {lr}")
    w = state.weights
    with np.errstate(over="ignore", invalid="ignore"):
        prediction = float(window @ w)
        child = float(primary_sample) - prediction
        new_w = w + (2.0 * lr * child) * window
    if not (math.isfinite(prediction) and math.isfinite(child) and np.isfinite(new_w).all()):
        return StepOutput(prediction, child, FilterState(w, state.iteration + 1, True))
    return StepOutput(prediction, child, FilterState(new_w, state.iteration + 1, False))


def _as_signal(x, rate=None) -> Signal:
    if isinstance(x, Signal):
        return x
    return Signal(x) if rate is None else Signal(x, rate)


def run_canceller(reference, primary, L: int, lr_source: float | LrSchedule = DEFAULT_FIXED_LR,
                  initial_weights=None) -> ExtractionResult:
    """Run the canceller over whole signals.

    ``lr_source`` is either a fixed step size or an :class:`LrSchedule`
    (whose delay length is overridden by ``L``); scheduled rates use the
    autocorrelation trace of ``reference``.

    The first L-1 output samples, before a full window exists, pass the
    primary through unchanged. After divergence the remaining output is the
    raw primary and ``diverged`` is set.
    """
    reference = _as_signal(reference)
    primary = _as_signal(primary, reference.sample_rate_hz)
    x = reference.samples
    d = primary.samples
    n = x.shape[0]
    if d.shape[0] != n:
        raise ShapeError(f"reference and primary lengths differ: {n} != {d.shape[0]}")
    if int(L) != L or L < 1:
        raise ShapeError(f"delay length must be a positive integer, got {L!r}")
    L = int(L)
    if n < L:
        raise ShapeError(f"signal length {n} is shorter than the delay length {L}")

    if isinstance(lr_source, LrSchedule):
        lr = learning_rate_series(x, lr_source.with_delay_length(L))
    else:
        lr_value = float(lr_source)
        if not lr_value >= 0:
            raise ValueError(f"learning rate must be non-negative, got {lr_source!r}")
        lr = np.full(n - L + 1, lr_value)

    windows = np.lib.stride_tricks.sliding_window_view(x, L)[:, ::-1]
    if initial_weights is None:
        w = np.zeros(L)
    else:
        w = np.array(initial_weights, dtype=np.float64)
        if w.shape != (L,):
            raise ShapeError(f"initial weights have shape {w.shape}, expected ({L},)")

    child = d.copy()
    pred = np.zeros(n)
    isfinite = math.isfinite
    diverged_at = None
    # Same arithmetic as lms_step, kept inline for speed.
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(n - L + 1):
            t = step + L - 1
            win = windows[step]
            p = float(win @ w)
            e = d[t] - p
            new_w = w + (2.0 * lr[step] * e) * win
            if not (isfinite(p) and isfinite(e) and isfinite(new_w.sum())):
                if not (isfinite(p) and isfinite(e)) or not np.isfinite(new_w).all():
                    diverged_at = t
                    break
            pred[t] = p
            child[t] = e
            w = new_w

    w.setflags(write=False)
    lr.setflags(write=False)
    rate = reference.sample_rate_hz
    return ExtractionResult(child=Signal(child, rate), lr_trace=lr, diverged=diverged_at is not None,
                            prediction=Signal(pred, rate), weights=w, diverged_at=diverged_at)
