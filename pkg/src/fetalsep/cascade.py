"""Two-stage cascade: pairwise chest/abdomen cancellers, then a combining filter.

Stage 1 runs two fixed-rate cancellers, chest_a -> abdomen_a and
chest_b -> abdomen_b, giving two child estimates e_a and e_b. Stage 2 runs a
scheduled-rate LMS filter that predicts e_b from e_a and outputs that
prediction: the part the two estimates share, i.e. the child, while
uncorrelated residue in either estimate is left out.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError
from .lms import DEFAULT_FIXED_LR, ExtractionResult, run_canceller
from .schedule import LrSchedule
from .signal import Recording, Signal


@dataclass(frozen=True)
class CascadeConfig:
    pair_a: tuple[int, int] = (0, 0)  # (chest index, abdomen index)
    pair_b: tuple[int, int] = (1, 1)
    stage1_L: int = 1
    stage1_lr: float = DEFAULT_FIXED_LR
    stage2_L: int = 1
    stage2_schedule: LrSchedule = field(default_factory=LrSchedule)

    def __post_init__(self):
        object.__setattr__(self, "pair_a", tuple(self.pair_a))
        object.__setattr__(self, "pair_b", tuple(self.pair_b))
        if self.pair_a == self.pair_b:
            raise ConfigError(f"the two stage-1 pairs must differ, both are {self.pair_a}")
        for pair in (self.pair_a, self.pair_b):
            if len(pair) != 2 or min(pair) < 0:
                raise ConfigError(f"pair must be (chest index, abdomen index), got {pair}")
        if self.stage1_L < 1 or self.stage2_L < 1:
            raise ConfigError("delay lengths must be >= 1")
        if not self.stage1_lr >= 0:
            raise ConfigError(f"stage-1 learning rate must be non-negative, got {self.stage1_lr}")

    def validate(self, recording: Recording) -> None:
        for chest, abdomen in (self.pair_a, self.pair_b):
            if chest >= len(recording.chest):
                raise ConfigError(f"chest index {chest} out of range ({len(recording.chest)} chest channels)")
            if abdomen >= len(recording.abdomen):
                raise ConfigError(f"abdomen index {abdomen} out of range "
                                  f"({len(recording.abdomen)} abdomen channels)")
        n = recording.n_samples
        if n < max(self.stage1_L, self.stage2_L):
            raise ConfigError(f"recording of {n} samples is shorter than a filter window")


def _stage1_pair(recording, pair, config):
    chest, abdomen = pair
    return run_canceller(recording.chest[chest], recording.abdomen[abdomen], config.stage1_L, config.stage1_lr)


def run_stage1(recording: Recording, config: CascadeConfig):
    """Return ``(e_a, e_b, diverged)`` from the two first-stage cancellers."""
    a = _stage1_pair(recording, config.pair_a, config)
    b = _stage1_pair(recording, config.pair_b, config)
    return a.child, b.child, a.diverged or b.diverged


def run_stage2(e_a: Signal, e_b: Signal, L: int, schedule: LrSchedule) -> ExtractionResult:
    """Predict e_b from e_a; the step-size trace is taken over e_a."""
    return run_canceller(e_a, e_b, L, schedule.with_delay_length(L))


def run_cascade(recording: Recording, config: CascadeConfig = CascadeConfig()) -> ExtractionResult:
    config.validate(recording)
    e_a, e_b, stage1_diverged = run_stage1(recording, config)
    stage2 = run_stage2(e_a, e_b, config.stage2_L, config.stage2_schedule)
    return ExtractionResult(child=stage2.prediction, lr_trace=stage2.lr_trace,
                            diverged=stage1_diverged or stage2.diverged, stage1_outputs=(e_a, e_b),
                            prediction=stage2.prediction, weights=stage2.weights,
                            diverged_at=stage2.diverged_at)
