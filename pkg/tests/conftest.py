import pytest

_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record a verdict for (part of) an acceptance criterion.

    Several tests may report on the same criterion; the summary line passes
    only if every part passed.
    """

    def record(number: int, passed: bool, detail: str):
        _CRITERIA.setdefault(number, []).append((bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        parts = _CRITERIA[n]
        ok = all(p for p, _ in parts)
        detail = "; ".join(("" if p else "[FAIL] ") + d for p, d in parts)
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
