"""Synthetic maternal/fetal ECG mixtures with known ground truth.

Each heart is a train of Gaussian pulses whose rate drifts sinusoidally by a
few percent over the recording. Every channel is a fixed linear mix of the
two pulse trains plus white Gaussian noise. Amplitudes default to a few
hundredths of a unit so that the classic fixed step size of 600 is stable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .signal import Recording, Signal

# rows: chest0..2, abdomen0..4; columns: (mother gain, child gain)
DEFAULT_GAINS = (
    (1.00, 0.05),
    (0.90, 0.08),
    (1.10, 0.03),
    (0.50, 1.00),
    (0.60, 1.00),
    (0.40, 1.00),
    (0.70, 1.00),
    (0.20, 1.00),
)


@dataclass(frozen=True)
class SynthParams:
    duration_s: float = 180.0
    sample_rate_hz: float = 500.0
    mother_hz: float = 0.8
    child_hz: float = 2.3
    mother_amplitude: float = 0.01
    child_amplitude: float = 0.0025
    noise_std: float = 2e-4
    seed: int = 42
    gains: tuple = DEFAULT_GAINS
    mother_width_s: float = 0.04
    child_width_s: float = 0.02
    drift: float = 0.02
    n_chest: int = 3

    def __post_init__(self):
        if not (self.duration_s > 0 and self.sample_rate_hz > 0):
            raise ConfigError("duration and sample rate must be positive")
        if not (self.mother_hz > 0 and self.child_hz > 0):
            raise ConfigError("heart rates must be positive")
        if self.noise_std < 0 or self.mother_amplitude < 0 or self.child_amplitude < 0:
            raise ConfigError("amplitudes and noise level must be non-negative")
        if not 0 <= self.drift < 1:
            raise ConfigError("drift must lie in [0, 1)")
        g = np.asarray(self.gains, dtype=float)
        if g.ndim != 2 or g.shape[1] != 2 or not 0 < self.n_chest < g.shape[0]:
            raise ConfigError(f"gains must be (channels, 2) with chest and abdomen rows, got {g.shape}")
        if int(self.n_samples) < 1:
            raise ConfigError("recording would contain no samples")

    @property
    def n_samples(self) -> int:
        return int(round(self.duration_s * self.sample_rate_hz))


def beat_times(rate_hz: float, duration_s: float, drift: float, drift_phase: float = 0.0) -> np.ndarray:
    """Beat instants of a heart whose rate is rate_hz * (1 + drift sin(2 pi t / duration + phase)).

    The drift completes one full cycle over the recording, so the number of
    beats is round(rate_hz * duration_s). Beat k sits where the accumulated
    phase reaches k + 1/2.
    """
    period = duration_s
    a = drift * period / (2 * math.pi)

    def phase(t):
        return rate_hz * (t - a * (np.cos(2 * math.pi * t / period + drift_phase) - math.cos(drift_phase)))

    total = phase(np.float64(duration_s))
    targets = np.arange(0.5, total, 1.0)
    # phase is strictly increasing, so invert it on a fine grid
    grid = np.linspace(0.0, duration_s, int(duration_s * rate_hz * 200) + 2)
    return np.interp(targets, phase(grid), grid)


def pulse_train(times: np.ndarray, beats: np.ndarray, width_s: float, amplitude: float) -> np.ndarray:
    out = np.zeros_like(times)
    if amplitude == 0 or beats.size == 0:
        return out
    dt = times[1] - times[0] if times.size > 1 else 1.0
    half = int(math.ceil(6 * width_s / dt))
    for b in beats:
        centre = int(round(b / dt))
        lo, hi = max(centre - half, 0), min(centre + half + 1, times.size)
        seg = times[lo:hi] - b
        out[lo:hi] += amplitude * np.exp(-0.5 * (seg / width_s) ** 2)
    return out


def generate(params: SynthParams = SynthParams()) -> tuple[Recording, Signal, Signal]:
    """Return ``(recording, true_child, true_mother)``.

    The truths are the pulse trains at unit gain; the default abdomen channels
    all carry the child at unit gain, so ``true_child`` is directly the
    component an abdomen lead should yield after cancellation.
    """
    n = params.n_samples
    fs = float(params.sample_rate_hz)
    t = np.arange(n) / fs
    mother = pulse_train(t, beat_times(params.mother_hz, params.duration_s, params.drift, 0.0),
                         params.mother_width_s, params.mother_amplitude)
    child = pulse_train(t, beat_times(params.child_hz, params.duration_s, params.drift, math.pi / 3),
                        params.child_width_s, params.child_amplitude)

    gains = np.asarray(params.gains, dtype=float)
    rng = np.random.default_rng(params.seed)
    noise = rng.standard_normal((gains.shape[0], n)) * params.noise_std
    channels = gains[:, :1] * mother + gains[:, 1:] * child + noise

    rec = Recording.from_arrays(channels[: params.n_chest], channels[params.n_chest:], fs)
    return rec, Signal(child, fs), Signal(mother, fs)
