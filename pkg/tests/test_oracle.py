import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import A, B, C, D, E, F, G, XI, random_db
from hauspg.model import pattern_avg_utility
from hauspg.oracle import (
    MAX_ORACLE_LENGTH,
    OracleConfig,
    OracleLimitError,
    enumerate_patterns,
    oracle_mine,
    pattern_utilities,
)

EXAMPLE_HAUSPS = [
    (((A,), (E,)), Fraction(36)),
    (((A, C), (E,)), Fraction(116, 3)),
    (((C,),), Fraction(48)),
    (((C,), (D,)), Fraction(36)),
    (((C,), (D,), (E,)), Fraction(38)),
    (((C,), (E,)), Fraction(57)),
    (((D,),), Fraction(48)),
    (((D,), (F,)), Fraction(39)),
    (((E,),), Fraction(66)),
    (((G,),), Fraction(40)),
    (((G,), (E,)), Fraction(38)),
]


def test_example_hausps(db):
    assert oracle_mine(db, OracleConfig(6, XI)) == EXAMPLE_HAUSPS


def test_extensions_of_a_c_then_b(db):
    au = pattern_utilities(db, 6)
    assert au[((A, C), (B, G))] == Fraction(63, 4)
    assert au[((A, C), (B, G), (E,))] == Fraction(99, 5)
    assert au[((A, C), (B, G), (D,), (E,))] == 20
    assert au[((A, C), (B,), (E,))] == Fraction(105, 4)
    assert au[((A, C), (B, E))] == Fraction(35, 2)


def test_zero_threshold_lists_everything(db):
    assert len(oracle_mine(db, OracleConfig(2))) == len(enumerate_patterns(db, 2))


@pytest.mark.parametrize("n", [0, MAX_ORACLE_LENGTH + 1])
def test_length_limit(db, n):
    with pytest.raises(OracleLimitError):
        OracleConfig(n)
    with pytest.raises(OracleLimitError):
        pattern_utilities(db, n)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_subset_walk_agrees_with_embedding_search(seed):
    d = random_db(random.Random(seed))
    for s, v in pattern_utilities(d, 4).items():
        assert pattern_avg_utility(s, d) == v
