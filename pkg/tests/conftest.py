import hypothesis
import pytest

from hlgt.config import enumerate_fake_flat
from hlgt.lattice import builtin
from hlgt.xmod import BUILTIN_XMODS

hypothesis.settings.register_profile("default", deadline=None, max_examples=60)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10)
hypothesis.settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def xmods():
    return {name: build() for name, build in BUILTIN_XMODS.items()}


@pytest.fixture(scope="session")
def g32(xmods):
    return xmods["g32"]


@pytest.fixture(scope="session")
def globe():
    return builtin("s3_globe")


@pytest.fixture(scope="session")
def minimal():
    return builtin("s3_minimal")


@pytest.fixture(scope="session")
def globe_g32(globe, g32):
    return enumerate_fake_flat(globe, g32)


@pytest.fixture(scope="session")
def minimal_g32(minimal, g32):
    return enumerate_fake_flat(minimal, g32)
