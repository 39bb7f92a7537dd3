import pytest

from fetalsep.cascade import CascadeConfig, run_stage1
from fetalsep.synth import SynthParams, generate


@pytest.fixture(scope="session")
def default_synth():
    """(recording, true_child, true_mother) for the default parameters, seed 42."""
    return generate(SynthParams(seed=42))


@pytest.fixture(scope="session")
def default_stage1(default_synth):
    rec, _, _ = default_synth
    return run_stage1(rec, CascadeConfig())


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
