import functools
import json
import os

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

HERE = os.path.dirname(os.path.abspath(__file__))

ACCEPTANCE_LINES: list = []


@functools.lru_cache(maxsize=None)
def family(seed: int):
    from canring import families as fam

    return fam.sample_family_data(seed)


@functools.lru_cache(maxsize=None)
def extrasym(seed: int):
    from canring import families as fam

    return fam.derive_extrasym(family(seed))


@pytest.fixture(scope="session")
def frozen():
    with open(os.path.join(HERE, "oracles", "frozen.json")) as fh:
        return json.load(fh)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
