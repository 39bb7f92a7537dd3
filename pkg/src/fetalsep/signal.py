"""Sampled signals, multichannel recordings and their CSV form.

A recording holds chest channels (reference inputs, dominated by the
maternal beat) and abdomen channels (primary inputs, maternal plus fetal).
All channels share one length and one sample rate.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, TextIO

import numpy as np

from .errors import DataError, IoError, LayoutError, ParseError, ShapeError

DEFAULT_SAMPLE_RATE_HZ = 500.0
ROLES = ("chest", "abdomen")


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ShapeError(f"signal samples must be one-dimensional, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Signal:
    """A real-valued sequence sampled at ``sample_rate_hz``."""

    samples: np.ndarray
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ

    def __post_init__(self):
        object.__setattr__(self, "samples", _frozen_array(self.samples))
        rate = float(self.sample_rate_hz)
        if not (rate > 0 and math.isfinite(rate)):
            raise DataError(f"sample rate must be positive and finite, got {self.sample_rate_hz!r}")
        object.__setattr__(self, "sample_rate_hz", rate)

    def __len__(self):
        return self.samples.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Signal):
            return NotImplemented
        return (self.sample_rate_hz == other.sample_rate_hz
                and np.array_equal(self.samples, other.samples))

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self)) / self.sample_rate_hz

    def tail(self, n: int) -> np.ndarray:
        return self.samples[-n:] if n < len(self) else self.samples


@dataclass(frozen=True)
class Recording:
    """Chest and abdomen channels of one session.

    The usual montage is 3 chest and 5 abdomen electrodes, but any layout
    with at least one channel is accepted; the cascade checks the channel
    indices it needs.
    """

    chest: tuple[Signal, ...] = field(default_factory=tuple)
    abdomen: tuple[Signal, ...] = field(default_factory=tuple)
    chest_names: tuple[str, ...] | None = None
    abdomen_names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "chest", tuple(self.chest))
        object.__setattr__(self, "abdomen", tuple(self.abdomen))
        channels = self.chest + self.abdomen
        if not channels:
            raise LayoutError("a recording needs at least one channel")
        n = len(channels[0])
        rate = channels[0].sample_rate_hz
        for ch in channels:
            if len(ch) != n:
                raise ShapeError(f"channel lengths differ: {len(ch)} != {n}")
            if ch.sample_rate_hz != rate:
                raise DataError(f"channel sample rates differ: {ch.sample_rate_hz} != {rate}")
        if self.chest_names is None:
            object.__setattr__(self, "chest_names", tuple(f"chest{i}" for i in range(len(self.chest))))
        if self.abdomen_names is None:
            object.__setattr__(self, "abdomen_names", tuple(f"abdomen{i}" for i in range(len(self.abdomen))))
        if len(self.chest_names) != len(self.chest) or len(self.abdomen_names) != len(self.abdomen):
            raise LayoutError("channel names do not match channel counts")

    @classmethod
    def from_arrays(cls, chest: Iterable, abdomen: Iterable, sample_rate_hz=DEFAULT_SAMPLE_RATE_HZ):
        return cls(chest=tuple(Signal(c, sample_rate_hz) for c in chest),
                   abdomen=tuple(Signal(a, sample_rate_hz) for a in abdomen))

    @property
    def n_samples(self) -> int:
        return len((self.chest + self.abdomen)[0])

    @property
    def sample_rate_hz(self) -> float:
        return (self.chest + self.abdomen)[0].sample_rate_hz

    @property
    def is_standard_layout(self) -> bool:
        return len(self.chest) == 3 and len(self.abdomen) == 5


def format_float(x: float) -> str:
    """Shortest text that parses back to the same float ("1" rather than "1.0")."""
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _parse_cell(text: str, line: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DataError(f"line {line}, column {column!r}: not a number: {text!r}") from None
    if not math.isfinite(value):
        raise DataError(f"line {line}, column {column!r}: non-finite value {text!r}")
    return value


def _read_table(source: TextIO | str):
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input, expected a header row", line=1) from None
    except csv.Error as exc:
        raise ParseError(str(exc), line=reader.line_num) from None
    header = [h.strip() for h in header]
    if not any(header):
        raise ParseError("empty header row", line=1)
    rows = []
    try:
        for row in reader:
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(row)}", line=reader.line_num)
            rows.append((reader.line_num, row))
    except csv.Error as exc:
        raise ParseError(str(exc), line=reader.line_num) from None
    return header, rows


def _infer_rate(times: list[float]) -> float:
    if len(times) < 2:
        return DEFAULT_SAMPLE_RATE_HZ
    span = times[-1] - times[0]
    if not span > 0:
        raise DataError("time column must be increasing")
    rate = (len(times) - 1) / span
    # undo the rounding introduced by printing t = i / rate
    nearest = round(rate)
    if nearest > 0 and abs(rate - nearest) <= 1e-9 * nearest:
        rate = float(nearest)
    return rate


def load_recording(source: TextIO | str, layout: Mapping[str, str] | None = None,
                   sample_rate_hz: float | None = None, time_column: str = "t") -> Recording:
    """Parse a CSV recording.

    ``layout`` maps column names to ``"chest"`` or ``"abdomen"``; channels keep
    the order in which the layout lists them. Without a layout, columns whose
    names start with ``chest`` or ``abdomen`` are picked up in file order.
    The sample rate comes from ``sample_rate_hz`` if given, else from the
    spacing of the time column, else defaults to 500 Hz.
    """
    header, rows = _read_table(source)
    if layout is None:
        layout = {name: role for name in header for role in ROLES if name.lower().startswith(role)}
    if not layout:
        raise LayoutError("layout assigns no columns")
    for name, role in layout.items():
        if role not in ROLES:
            raise LayoutError(f"column {name!r}: unknown role {role!r}")
        if name not in header:
            raise LayoutError(f"column {name!r} named in layout is missing from header {header}")
    if len(set(header)) != len(header):
        raise ParseError("duplicate column names in header", line=1)
    if not rows:
        raise ParseError("no data rows", line=2)

    index = {name: i for i, name in enumerate(header)}
    columns = {name: [_parse_cell(row[index[name]], line, name) for line, row in rows] for name in layout}

    if sample_rate_hz is None:
        if time_column in index:
            times = [_parse_cell(row[index[time_column]], line, time_column) for line, row in rows]
            sample_rate_hz = _infer_rate(times)
        else:
            sample_rate_hz = DEFAULT_SAMPLE_RATE_HZ

    chest = [name for name, role in layout.items() if role == "chest"]
    abdomen = [name for name, role in layout.items() if role == "abdomen"]
    return Recording(chest=tuple(Signal(columns[n], sample_rate_hz) for n in chest),
                     abdomen=tuple(Signal(columns[n], sample_rate_hz) for n in abdomen),
                     chest_names=tuple(chest), abdomen_names=tuple(abdomen))


def load_signal(source: TextIO | str, column: str = "value", sample_rate_hz: float | None = None) -> Signal:
    """Read one column of a CSV (by default the ``t,value`` form written by :func:`write_signal`)."""
    rec = load_recording(source, {column: "abdomen"}, sample_rate_hz=sample_rate_hz)
    return rec.abdomen[0]


def _write_rows(sink: TextIO, header: list[str], columns: list[np.ndarray], rate: float) -> None:
    n = len(columns[0])
    try:
        sink.write(",".join(header) + "\n")
        for i in range(n):
            cells = [format_float(i / rate)] + [format_float(c[i]) for c in columns]
            sink.write(",".join(cells) + "\n")
    except OSError as exc:
        raise IoError(f"failed to write CSV: {exc}") from exc


def write_signal(signal: Signal, sink: TextIO) -> None:
    """Write ``signal`` as ``t,value`` CSV; ``t`` is derived from the sample index."""
    if len(signal) == 0:
        raise ShapeError("cannot write an empty signal")
    _write_rows(sink, ["t", "value"], [signal.samples], signal.sample_rate_hz)


def write_signals(signals: Mapping[str, Signal], sink: TextIO) -> None:
    """Write several equal-length signals as columns next to one time column."""
    names = list(signals)
    if not names:
        raise ShapeError("no signals to write")
    first = signals[names[0]]
    if len(first) == 0:
        raise ShapeError("cannot write an empty signal")
    for name in names[1:]:
        if len(signals[name]) != len(first):
            raise ShapeError(f"signal {name!r} has a different length")
    _write_rows(sink, ["t"] + names, [signals[n].samples for n in names], first.sample_rate_hz)


def write_recording(recording: Recording, sink: TextIO) -> None:
    signals = dict(zip(recording.chest_names, recording.chest))
    signals.update(zip(recording.abdomen_names, recording.abdomen))
    write_signals(signals, sink)
