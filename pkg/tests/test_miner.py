import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import A, C, D, E, F, NAMES, XI, random_db
from hauspg.miner import ConfigError, MinerConfig, Strategy, mine
from hauspg.oracle import OracleConfig, oracle_mine
from hauspg.bounds import RrsPolicy

from test_oracle import EXAMPLE_HAUSPS


@pytest.mark.parametrize("strategy", [Strategy.RSAU, Strategy.TRSAU])
def test_example_database(db, strategy):
    results, stats = mine(db, MinerConfig(XI, strategy))
    assert results == EXAMPLE_HAUSPS
    assert stats.hausps_found == 11


def test_advance_on_example_is_a_subset(db):
    results, stats = mine(db, MinerConfig(XI, Strategy.ADVANCE))
    missing = set(EXAMPLE_HAUSPS) - set(results)
    assert set(results) <= set(EXAMPLE_HAUSPS)
    # pruned by the rising-sequence bounds although they qualify
    assert {s for s, _ in missing} == {((A,), (E,)), ((A, C), (E,)), ((D,), (F,))}
    assert stats.prunes["unpromising-item"] > 0


def test_max_length(db):
    results, _ = mine(db, MinerConfig(XI, max_pattern_length=1))
    assert [s for s, _ in results] == [((C,),), ((D,),), ((E,),), ((7,),)]


def test_trace(db):
    _, stats = mine(db, MinerConfig(XI, trace=True), NAMES)
    assert stats.trace[0].startswith("<{a}> | ")
    assert len(stats.trace) <= stats.candidates_generated


def test_stats_are_filled(db):
    _, stats = mine(db, MinerConfig(XI))
    assert stats.candidates_generated > 0
    assert stats.max_depth >= 3
    assert stats.peak_memory_estimate > 0
    assert stats.wall_time >= 0
    assert set(stats.prunes) <= {"peau-node", "irrelevant-item"}


@pytest.mark.parametrize("kwargs", [dict(xi=0), dict(xi=1.5), dict(xi="x"), dict(xi=0.1, strategy="fast"), dict(xi=0.1, max_pattern_length=0)])
def test_config_errors(kwargs):
    with pytest.raises((ConfigError, ValueError)):
        MinerConfig(**kwargs)


def test_trsau_generates_no_more_candidates(db):
    _, rsau = mine(db, MinerConfig(XI, Strategy.RSAU))
    _, trsau = mine(db, MinerConfig(XI, Strategy.TRSAU))
    _, adv = mine(db, MinerConfig(XI, Strategy.ADVANCE))
    assert trsau.candidates_generated <= rsau.candidates_generated
    assert adv.candidates_generated <= rsau.candidates_generated


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), xi=st.sampled_from(["0.05", "0.1", "0.2"]), strategy=st.sampled_from([Strategy.RSAU, Strategy.TRSAU]))
def test_pruning_switches_do_not_change_results(seed, xi, strategy):
    d = random_db(random.Random(seed))
    expected = oracle_mine(d, OracleConfig(5, xi))
    runs = {}
    for node in (True, False):
        for item in (True, False):
            results, stats = mine(d, MinerConfig(xi, strategy, max_pattern_length=5, node_pruning=node, item_pruning=item))
            assert results == expected
            runs[node, item] = stats.candidates_generated
    assert runs[True, True] <= min(runs.values())


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), xi=st.sampled_from(["0.05", "0.1", "0.2"]), policy=st.sampled_from(list(RrsPolicy)))
def test_advance_never_reports_false_patterns(seed, xi, policy):
    d = random_db(random.Random(seed))
    expected = set(oracle_mine(d, OracleConfig(5, xi)))
    results, _ = mine(d, MinerConfig(xi, Strategy.ADVANCE, policy, max_pattern_length=5))
    assert set(results) <= expected
