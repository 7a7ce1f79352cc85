import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fcaf import Profile, Setting  # noqa: E402
from oracles import EXAMPLE_VOTERS  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture
def example_profile():
    return Profile.from_voters(EXAMPLE_VOTERS, Setting(3, 3, 3))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
