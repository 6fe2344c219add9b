import pytest

from pretrlift.beilinson_geometry import BeilinsonCategory, twist_by_O_minus1_model
from pretrlift.cli.scenarios import two_lift_example


@pytest.fixture(scope="session")
def two_lifts():
    return two_lift_example()


@pytest.fixture(scope="session")
def b2():
    return BeilinsonCategory(2)


@pytest.fixture(scope="session")
def twist_model():
    return twist_by_O_minus1_model()


ACCEPTANCE: dict = {}


def record(number: int, name: str, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = (name, ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, 10):
        if number not in ACCEPTANCE:
            terminalreporter.write_line(f"criterion {number}: NOT RUN")
            continue
        name, ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} {name} ({detail})")
