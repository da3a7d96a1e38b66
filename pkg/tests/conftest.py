import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cdo import Agenda, CdoInstance, Profile, constraints_from_outcomes  # noqa: E402
from cdo.domains import Graph  # noqa: E402

QUAD_FEASIBLE = [(1, 0, 0, 1), (1, 1, 0, 0), (0, 1, 1, 0)]


def quad_instance() -> CdoInstance:
    # voter i approves a_i..a_4, so a_k has exactly k supporters
    agenda = Agenda(["a1", "a2", "a3", "a4"])
    profile = Profile([(1, 1, 1, 1), (0, 1, 1, 1), (0, 0, 1, 1), (0, 0, 0, 1)])
    return CdoInstance(agenda, profile, constraints_from_outcomes(QUAD_FEASIBLE, agenda))


def kite_graph() -> Graph:
    return Graph("HIJK", [("H", "I"), ("H", "K"), ("I", "J"), ("I", "K"), ("J", "K")],
                 [1, 2, 4, 3, 2])


@pytest.fixture
def quad():
    return quad_instance()


@pytest.fixture
def kite():
    return kite_graph()


# -- acceptance report ------------------------------------------------------------------

_REPORT: list[str] = []


@pytest.fixture
def report():
    def emit(name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else "")
        _REPORT.append(line)
        print(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in _REPORT:
            terminalreporter.write_line(line)
