import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from tournsim.core import Tournament, pair_count, tournament_from_matrix  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def cycle3():
    return tournament_from_matrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])


@pytest.fixture
def transitive4():
    return Tournament.transitive(4)


@st.composite
def tournaments(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    upper = draw(st.lists(st.booleans(), min_size=pair_count(n), max_size=pair_count(n)))
    return Tournament.from_upper_bits(n, upper)


def random_tournament(rng: np.random.Generator, n: int, p: float = 0.5) -> Tournament:
    return Tournament.from_upper_bits(n, rng.random(pair_count(n)) < p)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
