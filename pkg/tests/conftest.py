import random
from fractions import Fraction
from functools import lru_cache

import pytest

from hauspg.model import Threshold, make_database

# Item order inside itemsets follows the worked example: a < c < b < d < e < f < g.
A, C, B, D, E, F, G = range(1, 8)
NAMES = {A: "a", C: "c", B: "b", D: "d", E: "e", F: "f", G: "g"}
EU = {A: 2, B: 1, C: 4, D: 3, E: 6, F: 5, G: 8}
ROWS = [
    [[(A, 2), (C, 8)], [(A, 1), (B, 4), (E, 5)], [(C, 1), (D, 1)], [(E, 1), (F, 1)]],
    [[(A, 1), (D, 8)], [(B, 2), (F, 3)], [(A, 1), (D, 3), (F, 1)], [(B, 1), (D, 1)]],
    [[(A, 1), (C, 3)], [(C, 4), (B, 9), (G, 5)], [(B, 1), (D, 7)], [(E, 6), (F, 2)]],
]
XI = Fraction(12, 100)


def example_db():
    return make_database(ROWS, EU)


def random_db(rng: random.Random):
    """Small random database within the corpus limits."""
    n_items = rng.randint(2, 6)
    items = list(range(1, n_items + 1))
    eu = {i: rng.randint(1, 9) for i in items}
    rows = []
    for _ in range(rng.randint(1, 8)):
        row = []
        for _ in range(rng.randint(1, 6)):
            k = rng.randint(1, min(4, n_items))
            row.append([(i, rng.randint(1, 9)) for i in rng.sample(items, k)])
        rows.append(row)
    return make_database(rows, eu)


@lru_cache(maxsize=None)
def corpus(n: int = 200, seed: int = 20240521):
    rng = random.Random(seed)
    return tuple(random_db(rng) for _ in range(n))


@pytest.fixture
def db():
    return example_db()


@pytest.fixture
def threshold(db):
    return Threshold.of(XI, db)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
