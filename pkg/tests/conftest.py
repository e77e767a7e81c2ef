import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sectorflow.graph import SectorGraph  # noqa: E402

_acceptance_results = []
SESSION_START = time.perf_counter()


def pytest_collection_modifyitems(items):
    # tests marked run_last measure whole-suite properties such as runtime
    items.sort(key=lambda item: item.get_closest_marker("run_last") is not None)


@pytest.fixture
def k2():
    return SectorGraph.from_edges([(1, 2)])


@pytest.fixture
def p3():
    return SectorGraph.from_edges([(1, 2), (2, 3)])


@pytest.fixture
def triangle():
    return SectorGraph.from_edges([(1, 2), (2, 3), (1, 3)])


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance_results.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_results:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
