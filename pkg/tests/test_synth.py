import numpy as np
import pytest

from fetalsep.errors import ConfigError
from fetalsep.spectral import SpectralConfig, dominant_frequencies
from fetalsep.synth import DEFAULT_GAINS, SynthParams, beat_times, generate


def _channels(rec):
    return [c.samples for c in rec.chest + rec.abdomen]


def test_default_shape(default_synth):
    rec, child, mother = default_synth
    assert rec.is_standard_layout
    assert rec.n_samples == 90_000 and rec.sample_rate_hz == 500.0
    assert len(child) == len(mother) == 90_000


def test_default_gain_invariants():
    g = np.asarray(DEFAULT_GAINS)
    assert np.all(g[:3, 1] <= 0.1 * g[:3, 0])
    assert np.all(g[3:, 1] >= 0.3 * g[3:, 0])


def test_degenerate_mixing_is_scalar_multiple():
    rec, _, mother = generate(SynthParams(duration_s=20, noise_std=0.0, child_amplitude=0.0))
    g = np.asarray(DEFAULT_GAINS)[:, 0]
    for gain, ch in zip(g, _channels(rec)):
        np.testing.assert_array_equal(ch, gain * mother.samples)


def test_same_seed_is_bit_identical(default_synth):
    rec, child, mother = generate(SynthParams(seed=42))
    for a, b in zip(_channels(rec), _channels(default_synth[0])):
        assert np.array_equal(a, b)
    assert child == default_synth[1] and mother == default_synth[2]


def test_different_seeds_differ():
    a = generate(SynthParams(duration_s=10, seed=1))[0]
    b = generate(SynthParams(duration_s=10, seed=2))[0]
    assert not np.array_equal(a.abdomen[0].samples, b.abdomen[0].samples)


def test_mixing_residual_is_the_noise(default_synth):
    rec, child, mother = default_synth
    params = SynthParams()
    for gains, ch in zip(params.gains, _channels(rec)):
        resid = ch - gains[0] * mother.samples - gains[1] * child.samples
        assert np.var(resid) == pytest.approx(params.noise_std ** 2, rel=0.1)


def _count_pulses(x, height):
    above = x > height
    return int(np.sum(above[1:] & ~above[:-1]) + above[0])


def test_pulse_counts(default_synth):
    _, child, mother = default_synth
    p = SynthParams()
    assert abs(_count_pulses(child.samples, p.child_amplitude / 2) - round(p.child_hz * p.duration_s)) <= 1
    assert abs(_count_pulses(mother.samples, p.mother_amplitude / 2) - round(p.mother_hz * p.duration_s)) <= 1


def test_beat_rate_drift_is_bounded():
    beats = beat_times(2.3, 180.0, 0.02)
    rate = 1.0 / np.diff(beats)
    assert rate.min() >= 2.3 * 0.98 - 1e-6 and rate.max() <= 2.3 * 1.02 + 1e-6
    assert rate.max() - rate.min() > 2.3 * 0.03


def test_bad_params():
    with pytest.raises(ConfigError):
        SynthParams(duration_s=0)
    with pytest.raises(ConfigError):
        SynthParams(sample_rate_hz=-1)
    with pytest.raises(ConfigError):
        SynthParams(gains=((1.0, 0.0),))


def test_spectral_rates_on_long_windows(default_synth):
    """Rates read from 20 s windows of the weakest-maternal abdomen lead stay in the drift band.

    At 2 s the third maternal harmonic (2.4 Hz) is not resolvable from the
    2.3 Hz fetal line; 20 s windows give 0.05 Hz resolution.
    """
    rec = default_synth[0]
    cfg = SpectralConfig(window_seconds=20.0)
    w = cfg.window_samples(500.0)
    pad_bin = 500.0 / (w * cfg.zero_pad_factor)
    x = rec.abdomen[4].samples
    for i in range(len(x) // w):
        mother_hz, child_hz = dominant_frequencies(x[i * w:(i + 1) * w], 500.0, cfg)
        assert 0.8 * 0.98 - pad_bin <= mother_hz <= 0.8 * 1.02 + pad_bin
        assert 2.3 * 0.98 - pad_bin <= child_hz <= 2.3 * 1.02 + pad_bin


def test_spectral_rates_on_default_windows_median(default_synth):
    # single 2 s windows are unreliable; the median over the recording is not
    x = default_synth[0].abdomen[0].samples
    est = np.array([dominant_frequencies(x[i * 1000:(i + 1) * 1000], 500.0) for i in range(90)])
    med = np.median(est, axis=0)
    assert abs(med[0] - 0.8) <= 0.0625
    assert abs(med[1] - 2.3) <= 0.5  # one native bin
