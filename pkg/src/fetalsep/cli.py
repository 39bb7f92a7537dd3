"""Command-line front end: ``fetalsep {synth,separate,spectral,score,sweep,plot}``.

Exit status is 0 on success (a diverged filter still counts as success and
is reported), 1 for usage errors and 2 for data or configuration errors.
"""
from __future__ import annotations

import argparse
import math
import sys
import warnings
from pathlib import Path

from .cascade import CascadeConfig, run_cascade
from .errors import FetalSepError
from .lms import DEFAULT_FIXED_LR
from .metrics import DEFAULT_TAIL, accuracy, format_sweep_table, run_sweep, write_sweep_csv
from .schedule import DEFAULT_SWITCH_THRESHOLD, LrSchedule
from .signal import Signal, format_float, load_recording, load_signal, write_recording, write_signal
from .spectral import SpectralConfig, separate_spectral
from .synth import SynthParams, generate

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _pairs(text):
    """``a,b`` means pairs (chest a, abdomen a) and (chest b, abdomen b); ``c:a,c:a`` is explicit."""
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two pairs, got {text!r}")
    pairs = []
    for part in parts:
        try:
            if ":" in part:
                c, a = part.split(":")
                pairs.append((int(c), int(a)))
            else:
                pairs.append((int(part), int(part)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad pair {part!r}") from None
    return tuple(pairs)


def _layout(text):
    layout = {}
    for item in text.split(","):
        name, _, role = item.rpartition(":")
        if not name or role not in ("chest", "abdomen"):
            raise argparse.ArgumentTypeError(f"layout items look like column:chest or column:abdomen, got {item!r}")
        layout[name] = role
    return layout


def _channel(text):
    role, _, index = text.partition(":")
    if role not in ("chest", "abdomen") or not index.isdigit():
        raise argparse.ArgumentTypeError(f"channel looks like abdomen:0, got {text!r}")
    return role, int(index)


def _add_input(p):
    p.add_argument("--in", dest="input", required=True, type=Path, help="recording CSV")
    p.add_argument("--layout", type=_layout, default=None,
                   help="column roles, e.g. c1:chest,a1:abdomen (default: columns named chest*/abdomen*)")
    p.add_argument("--rate", type=float, default=None, help="sample rate in Hz (default: from the t column)")


def _add_cascade(p, with_stage2=True):
    p.add_argument("--pairs", type=_pairs, default=((0, 0), (1, 1)),
                   help="stage-1 pairs as a,b or chest:abdomen,chest:abdomen")
    p.add_argument("--L1", type=int, default=1, help="stage-1 delay length")
    p.add_argument("--lr1", type=float, default=DEFAULT_FIXED_LR, help="stage-1 fixed learning rate")
    p.add_argument("--threshold", type=int, default=DEFAULT_SWITCH_THRESHOLD,
                   help="iterations before the stage-2 rate switches from 1/(3 trace) to M/trace")
    if with_stage2:
        defaults = LrSchedule()
        p.add_argument("--L2", type=int, default=1, help="stage-2 delay length")
        p.add_argument("--M", type=float, default=defaults.misadjustment, help="stage-2 misadjustment")
        p.add_argument("--J", type=int, default=defaults.window_size, help="stage-2 trace window size")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = _Parser(prog="fetalsep", description="Fetal ECG separation from maternal recordings.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic recording with ground truth", formatter_class=fmt)
    d = SynthParams()
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--seed", type=int, default=d.seed, help="noise generator seed")
    p.add_argument("--duration", type=float, default=d.duration_s, help="seconds")
    p.add_argument("--sample-rate", type=float, default=d.sample_rate_hz, help="Hz")
    p.add_argument("--mother-hz", type=float, default=d.mother_hz, help="maternal beat rate")
    p.add_argument("--child-hz", type=float, default=d.child_hz, help="fetal beat rate")
    p.add_argument("--mother-amplitude", type=float, default=d.mother_amplitude, help="maternal pulse peak")
    p.add_argument("--child-amplitude", type=float, default=d.child_amplitude, help="fetal pulse peak")
    p.add_argument("--noise-std", type=float, default=d.noise_std, help="white noise level per channel")

    p = sub.add_parser("separate", help="run the two-stage LMS cascade", formatter_class=fmt)
    _add_input(p)
    p.add_argument("--out", type=Path, required=True, help="child estimate CSV")
    _add_cascade(p)

    p = sub.add_parser("spectral", help="run the windowed-DFT separator", formatter_class=fmt)
    _add_input(p)
    p.add_argument("--channel", type=_channel, default=("abdomen", 0), help="role:index of the input lead")
    p.add_argument("--out", type=Path, required=True, help="child estimate CSV")
    p.add_argument("--window", type=float, default=2.0, help="window length in seconds")
    p.add_argument("--split", type=float, default=1.5, help="Hz separating maternal and fetal bands")
    p.add_argument("--pad", type=int, default=8, help="zero-padding factor for peak search")
    p.add_argument("--harmonics", type=int, default=5, help="fetal harmonics kept")

    p = sub.add_parser("score", help="normalized RMS error of a result against a target", formatter_class=fmt)
    p.add_argument("--result", type=Path, required=True)
    p.add_argument("--target", type=Path, required=True)
    p.add_argument("--tail", type=int, default=DEFAULT_TAIL, help="number of final samples scored")

    p = sub.add_parser("sweep", help="score the cascade over an (L, M, J) grid", formatter_class=fmt)
    _add_input(p)
    p.add_argument("--target", type=Path, required=True, help="true child CSV")
    p.add_argument("--L", type=_int_list, default=[1, 2, 5, 10], help="stage-2 delay lengths")
    p.add_argument("--M", type=_float_list, default=[1e-5, 1e-7], help="misadjustment constants")
    p.add_argument("--J", type=_int_list, default=[1, 2, 5, 10], help="trace window sizes")
    p.add_argument("--out", type=Path, default=None, help="CSV table (default: only print)")
    p.add_argument("--tail", type=int, default=DEFAULT_TAIL, help="number of final samples scored")
    p.add_argument("--workers", type=int, default=1, help="worker processes")
    _add_cascade(p, with_stage2=False)

    p = sub.add_parser("plot", help="overlay CSV signals in an SVG chart", formatter_class=fmt)
    p.add_argument("--in", dest="input", required=True, help="comma-separated CSV files")
    p.add_argument("--out", type=Path, required=True, help="SVG file")
    p.add_argument("--max-points", type=int, default=20_000, help="per-signal decimation limit")
    p.add_argument("--title", default=None, help="chart title")
    return parser


def _read_recording(args):
    with open(args.input, encoding="utf-8", newline="") as f:
        return load_recording(f, args.layout, sample_rate_hz=args.rate)


def _read_signal(path):
    with open(path, encoding="utf-8", newline="") as f:
        return load_signal(f)


def _save_signal(signal, path):
    with open(path, "w", encoding="utf-8", newline="") as f:
        write_signal(signal, f)


def _cascade_config(args, L2=1, M=None, J=None):
    defaults = LrSchedule()
    schedule = LrSchedule(J if J is not None else defaults.window_size,
                          M if M is not None else defaults.misadjustment, args.threshold, L2)
    return CascadeConfig(pair_a=args.pairs[0], pair_b=args.pairs[1], stage1_L=args.L1,
                         stage1_lr=args.lr1, stage2_L=L2, stage2_schedule=schedule)


def cmd_synth(args, out):
    params = SynthParams(duration_s=args.duration, sample_rate_hz=args.sample_rate, mother_hz=args.mother_hz,
                         child_hz=args.child_hz, mother_amplitude=args.mother_amplitude,
                         child_amplitude=args.child_amplitude, noise_std=args.noise_std, seed=args.seed)
    rec, child, mother = generate(params)
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "recording.csv", "w", encoding="utf-8", newline="") as f:
        write_recording(rec, f)
    _save_signal(child, args.out / "child.csv")
    _save_signal(mother, args.out / "mother.csv")
    print(f"wrote {rec.n_samples} samples x {len(rec.chest) + len(rec.abdomen)} channels to {args.out}", file=out)


def cmd_separate(args, out):
    rec = _read_recording(args)
    config = _cascade_config(args, args.L2, args.M, args.J)
    result = run_cascade(rec, config)
    _save_signal(result.child, args.out)
    status = "diverged" if result.diverged else "ok"
    print(f"cascade {status}; stage-2 weights {[format_float(w) for w in result.weights]}", file=out)


def cmd_spectral(args, out):
    rec = _read_recording(args)
    role, index = args.channel
    channels = rec.chest if role == "chest" else rec.abdomen
    if index >= len(channels):
        raise UsageError(f"{role} channel {index} does not exist ({len(channels)} available)")
    config = SpectralConfig(window_seconds=args.window, split_hz=args.split, zero_pad_factor=args.pad,
                            harmonics=args.harmonics)
    result = separate_spectral(channels[index], config)
    _save_signal(result.child, args.out)
    print(f"spectral separation done; {len(result.low_confidence_windows)} low-confidence windows", file=out)


def cmd_score(args, out):
    value = accuracy(_read_signal(args.result), _read_signal(args.target), args.tail)
    print("inf" if math.isinf(value) else format_float(value), file=out)


def cmd_sweep(args, out):
    rec = _read_recording(args)
    target = _read_signal(args.target)
    rows = run_sweep(rec, target, args.L, args.M, args.J, base_config=_cascade_config(args),
                     tail=args.tail, workers=args.workers)
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8", newline="") as f:
            write_sweep_csv(rows, f)
    out.write(format_sweep_table(rows))


def cmd_plot(args, out):
    from .plot import plot_signals

    signals, labels = [], []
    for name in (s for s in args.input.split(",") if s):
        with open(name, encoding="utf-8", newline="") as f:
            rec = load_recording(f, None if _has_role_columns(name) else _value_layout(name))
        for label, sig in zip(rec.chest_names + rec.abdomen_names, rec.chest + rec.abdomen):
            signals.append(sig)
            labels.append(f"{Path(name).stem}:{label}")
    plot_signals(signals, labels, args.out, max_points=args.max_points, title=args.title)
    print(f"wrote {args.out}", file=out)


def _header(name):
    with open(name, encoding="utf-8") as f:
        return [h.strip() for h in f.readline().split(",")]


def _has_role_columns(name):
    return any(h.lower().startswith(("chest", "abdomen")) for h in _header(name))


def _value_layout(name):
    layout = {h: "abdomen" for h in _header(name) if h and h != "t"}
    if not layout:
        raise UsageError(f"{name} has no data columns")
    return layout


COMMANDS = {"synth": cmd_synth, "separate": cmd_separate, "spectral": cmd_spectral,
            "score": cmd_score, "sweep": cmd_sweep, "plot": cmd_plot}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"fetalsep {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FetalSepError, OSError, ValueError) as exc:
        print(f"fetalsep {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
