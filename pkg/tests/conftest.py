import pytest

from qqw.field import make_prime_field_context, make_rational_context


@pytest.fixture
def F7():
    return make_prime_field_context(7, 2)


@pytest.fixture
def F13():
    return make_prime_field_context(13, 5)


@pytest.fixture
def Q2():
    return make_rational_context(2)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
