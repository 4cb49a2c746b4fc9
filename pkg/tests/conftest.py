import numpy as np
import pytest

from uwbsim.pulses import PulseSpec, make_pulse
from uwbsim.transmitter import SystemConfig


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def rc_pulse():
    return make_pulse(PulseSpec("raised_cosine"))


@pytest.fixture
def cfg2():
    return SystemConfig(nf=2)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
