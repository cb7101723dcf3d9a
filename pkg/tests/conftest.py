import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dbsf.graph import UNBOUNDED, Graph, Instance  # noqa: E402


def path_sat(b_a=1):
    """s - a - t with a single demand (s, t)."""
    g = Graph(3, (UNBOUNDED, Fraction(b_a), UNBOUNDED), ((0, 1), (1, 2)), labels=("s", "a", "t"))
    return Instance(g, ((0, 2),))


@pytest.fixture
def sat():
    return path_sat()


def pytest_terminal_summary(terminalreporter, config):
    from test_acceptance import ACCEPTANCE

    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
