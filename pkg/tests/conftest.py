import pytest
from mpmath import mp

_ACCEPTANCE = []


@pytest.fixture(autouse=True)
def _isolated_precision():
    # mpmath precision is process-global; keep tests from leaking it
    prec = mp.prec
    yield
    mp.prec = prec


@pytest.fixture
def acceptance_line():
    """Record one pass/fail line for the acceptance summary."""

    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE):
        terminalreporter.write_line(line)
