"""Separate a fetal ECG from multichannel maternal recordings.

The main route is an LMS adaptive noise-canceller cascade with a step size
driven by a windowed autocorrelation trace; a block-wise DFT separator is
provided for comparison, along with a synthetic recording generator, the
normalized RMS error score and a parameter sweep.
"""
from .cascade import CascadeConfig, run_cascade, run_stage1, run_stage2
from .errors import (ConfigError, DataError, DivergedError, FetalSepError, IoError, LayoutError,
                     MetricError, ParseError, PeakError, ShapeError)
from .lms import DEFAULT_FIXED_LR, ExtractionResult, FilterState, StepOutput, lms_step, run_canceller
from .metrics import SweepRow, accuracy, format_sweep_table, run_sweep, write_sweep_csv
from .schedule import (DelayMatrix, LrSchedule, build_delay_matrix, correlation_trace, learning_rate,
                       learning_rate_series, trace_series)
from .signal import (Recording, Signal, load_recording, load_signal, write_recording, write_signal,
                     write_signals)
from .spectral import (SpectralConfig, dominant_frequencies, forward_dft, inverse_dft, mask_window,
                       separate_spectral)
from .synth import SynthParams, generate

__version__ = "0.1.0"
