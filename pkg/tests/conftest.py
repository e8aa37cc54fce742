from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
CRITERIA = {1: "group orders", 2: "orbit lemmas", 3: "point counts", 4: "map identities",
            5: "factorizations", 6: "parity image", 7: "property suites"}
_results: dict[int, str] = {}


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture
def criterion():
    """Record a named acceptance criterion from a dict of boolean checks and
    assert that all of them hold."""
    def record(number: int, checks: dict[str, bool]):
        failed = [name for name, ok in checks.items() if not ok]
        status = "FAIL" if failed else "PASS"
        line = f"criterion {number} ({CRITERIA[number]}): {status}, {len(checks) - len(failed)}/{len(checks)} checks"
        if failed:
            line += f"; failed: {', '.join(failed)}"
        _results[number] = line
        print(line)
        assert not failed, line
    return record


def pytest_terminal_summary(terminalreporter):
    if not any("test_acceptance" in str(i.fspath) for i in terminalreporter.stats.get("passed", [])
               + terminalreporter.stats.get("failed", [])):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        terminalreporter.write_line(_results.get(n, f"criterion {n} ({CRITERIA[n]}): FAIL, did not complete"))
