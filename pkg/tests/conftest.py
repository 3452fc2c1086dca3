import pytest

from designramsey.structures import PartialDesign

from corpus import FANO, ONE_BLOCK, P321

ACCEPTANCE_RESULTS = []


@pytest.fixture
def fano():
    return FANO


@pytest.fixture
def one_block():
    return ONE_BLOCK


@pytest.fixture
def empty7():
    return PartialDesign(P321, 7)


@pytest.fixture
def criterion():
    """Record one acceptance criterion verdict; printed in the terminal summary."""

    def record(number, name, ok, detail=""):
        ACCEPTANCE_RESULTS.append((number, name, bool(ok), detail))
        print(f"[{'PASS' if ok else 'FAIL'}] {number}. {name} {detail}".rstrip())
        assert ok, f"criterion {number} ({name}) failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok, detail in sorted(ACCEPTANCE_RESULTS, key=lambda r: (r[0], r[1])):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {name} {detail}".rstrip())
