import numpy as np
import pytest

# Criterion lines recorded by the acceptance module, echoed at the end of the run.
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture
def k_grid():
    return np.geomspace(1e-3, 1e3, 61)
