"""Two-stage pooling baseline: group cost, partition DP, brute force."""

import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from grouptest import (
    Population,
    SizeLimitError,
    brute_force_partitions,
    dorfman_group_cost,
    optimal_ordered_partition,
    partition_to_json,
    sort_by_q_descending,
)

from helpers import random_population, stream

probs = st.floats(min_value=0.02, max_value=0.98, allow_nan=False)


def test_group_cost_singleton():
    pop = Population.from_q([0.9, 0.8])
    assert dorfman_group_cost(pop, 1, 1) == 1
    assert dorfman_group_cost(pop, 2, 2) == 1


def test_group_cost_pair():
    pop = Population.from_q([0.9, 0.8])
    assert dorfman_group_cost(pop, 1, 2) == pytest.approx(1 + 2 * (1 - 0.72), abs=1e-12)


def test_group_cost_validates_range():
    pop = Population.from_q([0.9, 0.8])
    with pytest.raises(IndexError):
        dorfman_group_cost(pop, 0, 1)
    with pytest.raises(IndexError):
        dorfman_group_cost(pop, 1, 3)


def test_low_prevalence_pools_high_prevalence_does_not():
    rare = Population.from_p([0.01] * 6)
    assert len(optimal_ordered_partition(rare).partition) < 6
    common = Population.from_p([0.4] * 6)
    assert optimal_ordered_partition(common).partition == tuple((i, i) for i in range(1, 7))


def test_partition_covers_sorted_population():
    for k in range(12):
        pop = random_population(stream("dorf-cover", k), 1 + k % 9)
        result = optimal_ordered_partition(pop)
        flat = [i for start, end in result.partition for i in range(start, end + 1)]
        assert flat == list(range(1, pop.n + 1))


def test_cost_is_sum_of_group_costs():
    for k in range(12):
        pop = random_population(stream("dorf-sum", k), 1 + k % 9)
        result = optimal_ordered_partition(pop)
        ordered = sort_by_q_descending(pop)
        total = sum(dorfman_group_cost(ordered, i, j) for i, j in result.partition)
        assert total == pytest.approx(result.cost, abs=1e-12)


def test_matches_brute_force():
    for k in range(40):
        pop = random_population(stream("dorf-brute", k), 1 + k % 12)
        dp = optimal_ordered_partition(pop).cost
        brute = brute_force_partitions(pop)
        assert abs(dp - brute) <= 1e-12


def test_empty_population():
    result = optimal_ordered_partition(Population(()))
    assert result.partition == ()
    assert result.cost == 0.0


def test_brute_force_size_limit():
    with pytest.raises(SizeLimitError):
        brute_force_partitions(Population.from_p([0.1] * 17))


def test_json_export():
    pop = Population.from_q([0.62, 0.62, 0.65, 0.68])
    payload = json.loads(partition_to_json(pop))
    assert set(payload) == {"partition", "group_costs", "cost", "q_sorted"}
    assert payload["q_sorted"] == [0.68, 0.65, 0.62, 0.62]
    assert payload["cost"] == pytest.approx(4.0)
    assert len(payload["partition"]) == len(payload["group_costs"])
    assert sum(payload["group_costs"]) == pytest.approx(payload["cost"], abs=1e-12)


@given(st.lists(probs, min_size=1, max_size=12))
def test_dp_cost_never_exceeds_individual_testing(ps):
    pop = Population.from_p(ps)
    assert optimal_ordered_partition(pop).cost <= pop.n + 1e-12


@given(st.lists(probs, min_size=1, max_size=10))
def test_dp_lower_bounds_any_explicit_partition(ps):
    """The DP result is no worse than the single-group partition."""
    pop = Population.from_p(ps)
    ordered = sort_by_q_descending(pop)
    one_group = dorfman_group_cost(ordered, 1, pop.n)
    assert optimal_ordered_partition(pop).cost <= one_group + 1e-12
