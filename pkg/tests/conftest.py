import os

import pytest
from hypothesis import HealthCheck, settings

from knottheta.pd import parse_pd

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

TREFOIL_TEXT = "[[1,4,2,5],[3,6,4,1],[5,2,6,3]]"


@pytest.fixture
def trefoil():
    return parse_pd(TREFOIL_TEXT)


@pytest.fixture
def figure8():
    from knottheta.table import lookup

    return lookup("4_1").pd


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
