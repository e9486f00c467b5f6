import random

import pytest

from prismkit.delta import bk_prism, crystalline_prism, q_prism


@pytest.fixture
def rng():
    return random.Random(20260419)


@pytest.fixture(scope="session")
def crys2():
    return crystalline_prism(2, 6)


@pytest.fixture(scope="session")
def bk2():
    return bk_prism(2, 6, 8)


@pytest.fixture(scope="session")
def catalog_prisms():
    out = []
    for p in (2, 3):
        out += [crystalline_prism(p, 6), bk_prism(p, 6, 8), q_prism(p, 6, 16, 0)]
    return out


ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
