"""Block-wise DFT separation of the fetal beat.

The mixture is cut into non-overlapping windows (2 s by default). In each
window the maternal and fetal beat rates are read off the zero-padded
magnitude spectrum, either side of ``split_hz``; the window is then rebuilt
from the fetal fundamental and its first few harmonics only. Peaks are
located on a Hamming-tapered spectrum, because with a plain rectangular
window the sidelobes of one rate push the other's padded peak off its true
bin; the reconstruction itself masks the untapered DFT. Results are
emitted one window late, so the output lags the input by exactly one window.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, PeakError, ShapeError
from .lms import ExtractionResult
from .signal import Signal


@dataclass(frozen=True)
class SpectralConfig:
    window_seconds: float = 2.0
    split_hz: float = 1.5
    zero_pad_factor: int = 8
    harmonics: int = 5
    confidence_ratio: float = 3.0
    # peak search only; None for rectangular, else a numpy window name
    taper: str | None = "hamming"

    def __post_init__(self):
        if not self.window_seconds > 0:
            raise ConfigError("window_seconds must be positive")
        if self.window_seconds < 1:
            warnings.warn("windows shorter than 1 s cannot resolve maternal rates below 1 Hz",
                          RuntimeWarning, stacklevel=3)
        if not self.split_hz > 0:
            raise ConfigError("split_hz must be positive")
        if int(self.zero_pad_factor) != self.zero_pad_factor or self.zero_pad_factor < 1:
            raise ConfigError("zero_pad_factor must be a positive integer")
        if int(self.harmonics) != self.harmonics or self.harmonics < 1:
            raise ConfigError("harmonics must be a positive integer")

    def window_samples(self, sample_rate_hz: float) -> int:
        n = int(round(self.window_seconds * sample_rate_hz))
        if n < 2:
            raise ConfigError(f"a {self.window_seconds} s window at {sample_rate_hz} Hz has fewer than 2 samples")
        if self.split_hz >= sample_rate_hz / 2:
            raise ConfigError(f"split_hz {self.split_hz} is not below Nyquist ({sample_rate_hz / 2} Hz)")
        return n


def forward_dft(window) -> np.ndarray:
    x = np.asarray(window)
    if x.ndim != 1 or x.shape[0] == 0:
        raise ShapeError("DFT needs a non-empty vector")
    return np.fft.fft(x)


def inverse_dft(spectrum) -> np.ndarray:
    X = np.asarray(spectrum)
    if X.ndim != 1 or X.shape[0] == 0:
        raise ShapeError("inverse DFT needs a non-empty vector")
    return np.fft.ifft(X)


def _taper(n: int, config: SpectralConfig) -> np.ndarray | None:
    if config.taper is None:
        return None
    try:
        return getattr(np, config.taper)(n)
    except AttributeError:
        raise ConfigError(f"unknown taper {config.taper!r}") from None


def padded_spectrum(window, sample_rate_hz: float, config: SpectralConfig):
    """Frequencies and magnitudes of the zero-padded, mean-removed window (non-negative half)."""
    x = np.asarray(window, dtype=np.float64)
    x = x - x.mean()
    taper = _taper(x.shape[0], config)
    if taper is not None:
        x = x * taper
    nfft = x.shape[0] * int(config.zero_pad_factor)
    mag = np.abs(np.fft.rfft(x, nfft))
    freqs = np.arange(mag.shape[0]) * (sample_rate_hz / nfft)
    return freqs, mag


def _band_peak(freqs, mag, lo, hi, band):
    """Largest local maximum of ``mag`` with lo <= f < hi (DC excluded). Returns (bin, magnitude)."""
    inner = np.arange(1, mag.shape[0] - 1)
    is_peak = np.zeros(mag.shape[0], dtype=bool)
    is_peak[inner] = (mag[inner] >= mag[inner - 1]) & (mag[inner] >= mag[inner + 1])
    if mag.shape[0] > 1:
        is_peak[-1] = mag[-1] > mag[-2]
    in_band = (freqs >= lo) & (freqs < hi) & (freqs > 0)
    candidates = np.flatnonzero(is_peak & in_band & (mag > 0))
    if candidates.size == 0:
        raise PeakError(band)
    k = candidates[np.argmax(mag[candidates])]
    return int(k), float(mag[k])


def dominant_frequencies(window, sample_rate_hz: float, config: SpectralConfig = SpectralConfig()):
    """Return ``(mother_hz, child_hz)``: the strongest spectral peaks below and above ``split_hz``."""
    config.window_samples(sample_rate_hz)
    freqs, mag = padded_spectrum(window, sample_rate_hz, config)
    k_m, _ = _band_peak(freqs, mag, 0.0, config.split_hz, "mother")
    k_c, _ = _band_peak(freqs, mag, config.split_hz, math.inf, "child")
    return float(freqs[k_m]), float(freqs[k_c])


def child_band_mask(n: int, sample_rate_hz: float, child_hz: float, harmonics: int) -> np.ndarray:
    """Boolean mask over the ``rfft`` bins of an n-sample window keeping child_hz and its harmonics."""
    freqs = np.fft.rfftfreq(n, 1.0 / sample_rate_hz)
    width = sample_rate_hz / n  # one unpadded bin
    keep = np.zeros(freqs.shape[0], dtype=bool)
    for h in range(1, harmonics + 1):
        keep |= np.abs(freqs - h * child_hz) <= width * (1 + 1e-9)
    return keep


def mask_window(window, sample_rate_hz: float, config: SpectralConfig = SpectralConfig()):
    """Rebuild one window from its child band. Returns ``(reconstruction, child_hz, confident)``.

    An all-zero (or otherwise peakless) window yields zeros and is reported
    as not confident.
    """
    x = np.asarray(window, dtype=np.float64)
    freqs, mag = padded_spectrum(x, sample_rate_hz, config)
    try:
        k, peak = _band_peak(freqs, mag, config.split_hz, math.inf, "child")
    except PeakError:
        return np.zeros_like(x), math.nan, False
    child_hz = float(freqs[k])
    band = freqs >= config.split_hz
    confident = peak >= config.confidence_ratio * float(np.median(mag[band]))
    X = np.fft.rfft(x)
    X[~child_band_mask(x.shape[0], sample_rate_hz, child_hz, config.harmonics)] = 0
    return np.fft.irfft(X, x.shape[0]), child_hz, confident


def separate_spectral(mixture: Signal, config: SpectralConfig = SpectralConfig()) -> ExtractionResult:
    fs = mixture.sample_rate_hz
    w = config.window_samples(fs)
    x = mixture.samples
    n = x.shape[0]
    if n < w:
        raise ShapeError(f"mixture of {n} samples is shorter than one {w}-sample window")
    out = np.zeros(n)
    weak = []
    for i in range(n // w):
        recon, _, confident = mask_window(x[i * w:(i + 1) * w], fs, config)
        if not confident:
            weak.append(i)
        lo = (i + 1) * w
        hi = min(lo + w, n)
        if lo < n:
            out[lo:hi] = recon[: hi - lo]
    return ExtractionResult(child=Signal(out, fs), low_confidence_windows=tuple(weak))
