import importlib.util
import os
import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

from revpebble.graph import gen_random_dag, parse_dag
from revpebble.strategy import PebblingStrategy

ROOT = Path(__file__).resolve().parents[1]

FIG2_TEXT = """\
node A
node B
node C A
node D B
node E C D
node F A
output E
output F
inputs 4
"""

# configuration sequences listed for the six-node example
BENNETT_SEQ = [
    "", "A", "AB", "ABC", "ABCD", "ABCDE", "ABCDEF", "ABCEF", "ABEF", "AEF", "EF",
]
FOUR_PEBBLE_SEQ = [
    "", "A", "AC", "C", "BC", "BCD", "CD", "CDE", "ACDE", "ADE", "ADEF", "DEF", "BDEF", "BEF", "EF",
]


def seq(configs, pebbles, mode="sequential"):
    return PebblingStrategy(tuple(frozenset(c) for c in configs), mode, pebbles)


@pytest.fixture
def fig2():
    g, stripped = parse_dag(FIG2_TEXT)
    assert stripped == 0
    return g


@pytest.fixture
def bennett_seq():
    return seq(BENNETT_SEQ, 6)


@pytest.fixture
def four_pebble_seq():
    return seq(FOUR_PEBBLE_SEQ, 4)


def random_dags(min_nodes=1, max_nodes=8, max_deps=3):
    return st.builds(
        gen_random_dag,
        st.integers(min_nodes, max_nodes),
        st.integers(1, max_deps),
        st.integers(0, 2**32),
    )


def external_solver_cmd():
    """Command for an external DIMACS solver, or None when none is available."""
    if os.environ.get("PEBBLE_SOLVER"):
        return os.environ["PEBBLE_SOLVER"]
    if importlib.util.find_spec("pysat") is not None:
        return f"{sys.executable} {ROOT / 'scripts' / 'pysat_dimacs.py'}"
    return None


@pytest.fixture
def solver_cmd():
    cmd = external_solver_cmd()
    if cmd is None:
        pytest.skip("no external SAT solver configured (set PEBBLE_SOLVER or install python-sat)")
    return cmd


_CRITERIA: list[str] = []


@pytest.fixture
def criterion():
    def record(number, passed, detail):
        _CRITERIA.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
