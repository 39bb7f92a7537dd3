"""SVG line charts of one or more signals on a shared time axis."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .signal import Signal


def plot_signals(signals: Sequence[Signal], labels: Sequence[str], path, max_points: int = 20_000,
                 title: str | None = None) -> None:
    """Overlay ``signals`` and save an SVG to ``path``.

    Long signals are decimated by a fixed stride to at most ``max_points``
    points each. Output is byte-stable for identical input.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if not signals:
        raise ValueError("nothing to plot")
    with matplotlib.rc_context({"svg.hashsalt": "fetalsep", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(10, 4))
        for sig, label in zip(signals, labels):
            stride = max(1, int(np.ceil(len(sig) / max_points)))
            ax.plot(sig.times[::stride], sig.samples[::stride], linewidth=0.8, label=label)
        ax.set_xlabel("time (s)")
        ax.set_ylabel("amplitude")
        if title:
            ax.set_title(title)
        ax.legend(loc="upper right")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
