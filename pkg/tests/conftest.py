import sys
from pathlib import Path

import pytest

from orthochron import MessageBudgetError, gen_random, parse_trace

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text()


def load_fixture(name: str):
    return parse_trace(fixture_text(name))


def random_trace(seed: int, n_sites: int, procs_per_site: int, n_messages: int):
    """gen_random, shrinking the message count to the reported budget."""
    try:
        return gen_random(seed, n_sites, procs_per_site, n_messages)
    except MessageBudgetError as exc:
        return gen_random(seed, n_sites, procs_per_site, exc.available)


@pytest.fixture(scope="session")
def fig2():
    return load_fixture("fig2.trace")


@pytest.fixture(scope="session")
def fig5():
    return load_fixture("fig5.trace")


@pytest.fixture(scope="session")
def fig7():
    return load_fixture("fig7.trace")


@pytest.fixture(scope="session")
def mo2():
    return load_fixture("mo2.trace")


@pytest.fixture(scope="session")
def single_site():
    return load_fixture("single-site.trace")


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for line in acceptance.RESULTS:
        terminalreporter.write_line(line)
