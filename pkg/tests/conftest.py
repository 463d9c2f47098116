import numpy as np
import pytest

from ytype_eit.model import DriveConfig, ModelParams
from ytype_eit.spectra import figure_preset

ACCEPTANCE_LINES = []


@pytest.fixture
def fig2a():
    preset = figure_preset("fig2a")
    return preset.drive, preset.params


@pytest.fixture
def fig2a_grid():
    return np.linspace(-3.0, 3.0, 2401)


@pytest.fixture
def two_level():
    return DriveConfig(), ModelParams()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
