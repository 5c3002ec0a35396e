import sys
from pathlib import Path

import pytest

from hornlogic import fixture_path

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES = []


@pytest.fixture
def it_kb_path():
    return fixture_path("it_service_desk.lkb")


@pytest.fixture
def medical_kb_path():
    return fixture_path("medical.lkb")


@pytest.fixture
def measurements_path():
    return fixture_path("published_measurements.json")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l[2:4])):
            terminalreporter.write_line(line)
