import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mbcalc import hopf_family, theta_torus  # noqa: E402

DATA = Path(__file__).resolve().parents[1] / "src" / "mbcalc" / "data"


@pytest.fixture(scope="session")
def hopf34():
    return hopf_family(3, 4)


@pytest.fixture(scope="session")
def hopf35():
    return hopf_family(3, 5)


@pytest.fixture(scope="session")
def theta():
    return theta_torus()


@pytest.fixture(scope="session")
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
