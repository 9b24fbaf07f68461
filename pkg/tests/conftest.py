import os
import random

import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def seed() -> int:
    return int(os.environ.get("MOTION_SEED", "0"))


@pytest.fixture
def rng(seed) -> random.Random:
    return random.Random(seed)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
