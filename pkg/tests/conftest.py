import os
import random

import pytest

_CRITERIA: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    outcome = "passed" if call.excinfo is None else "failed"
    _CRITERIA.setdefault(marker.args[0], []).append(outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        results = _CRITERIA[n]
        status = "PASS" if all(r == "passed" for r in results) else "FAIL"
        passed = results.count("passed")
        terminalreporter.write_line(f"criterion {n:>2}: {status} ({passed}/{len(results)} checks)")


@pytest.fixture
def seed() -> int:
    return int(os.environ.get("MSK_SEED", "20240521"))


@pytest.fixture
def rng(seed) -> random.Random:
    return random.Random(seed)
