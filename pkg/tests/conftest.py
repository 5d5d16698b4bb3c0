import sys

import pytest

from homrb.fixtures import load_data


@pytest.fixture(scope="session")
def jackson():
    return load_data("jackson-sl2")


@pytest.fixture(scope="session")
def example1():
    return load_data("example1")


@pytest.fixture(scope="session")
def field_m1():
    return load_data("field-weight-m1")


@pytest.fixture(scope="session")
def upper():
    return load_data("upper-triangular")


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance.summary_lines():
        terminalreporter.write_line(line)
