import functools
import sys
from fractions import Fraction

import pytest

from bellbound.oracle import brute_force_max
from bellbound.scenario import BellScenario

# (N, d) cells with d^(2N) <= 10^8
GRID = [(n, d) for n in range(2, 8) for d in (2, 3, 4) if d ** (2 * n) <= 10**8]
ALL_WITNESSES = 10**6


@functools.lru_cache(maxsize=None)
def grid_search(n, d):
    """Exhaustive nu=1/4 search with every argmax kept; shared across test modules."""
    return brute_force_max(BellScenario(n, d, Fraction(1, 4)), witness_cap=ALL_WITNESSES)


@pytest.fixture(params=GRID, ids=lambda c: f"N{c[0]}-d{c[1]}")
def cell(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
