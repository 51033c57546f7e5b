from pathlib import Path

import pytest

from disponte.parser import parse_kb, parse_query

FIXTURES = Path(__file__).parent / "fixtures"
NATURE_LOVER = "ClassAssertion(NatureLover, kevin)"


@pytest.fixture
def example1():
    return parse_kb((FIXTURES / "example1.dlp").read_text())


@pytest.fixture
def example2():
    return parse_kb((FIXTURES / "example2.dlp").read_text())


@pytest.fixture
def nature_lover():
    return parse_query(NATURE_LOVER)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
