"""Adaptive oracle, order searches, and the two-unit closed form."""

import itertools
import json
from fractions import Fraction

import pytest

from grouptest import (
    GOLDEN_RATIO_Q,
    Population,
    R_RANGE_HI,
    R_RANGE_LO,
    SizeLimitError,
    TwoUnitStrategy,
    ValidationError,
    best_fixed_order,
    best_gpta_order,
    fixed_order_optimal,
    gpta_cost,
    optimal_nested,
    policy_expected_cost,
    sample_population,
    two_unit_optimal,
)
from grouptest.rng import derive_stream

from helpers import random_population, stream

BENCHMARK = Population.from_q([0.62, 0.62, 0.65, 0.68])


def test_single_unit():
    result = optimal_nested(Population.from_q([0.3]))
    assert result.cost == pytest.approx(1.0)
    assert result.optimal_first_moves == 1


def test_two_units_match_closed_form():
    result = optimal_nested(Population.from_q([0.62, 0.7]))
    assert result.cost == pytest.approx(1.866, abs=1e-12)
    assert two_unit_optimal(0.7, 0.62).cost == pytest.approx(result.cost, abs=1e-12)


def test_benchmark_cost_and_root_moves():
    result = optimal_nested(BENCHMARK)
    assert result.cost == pytest.approx(3.8449072, abs=1e-7)
    assert result.optimal_first_moves == 4


def test_policy_witness_matches_cost():
    for k in range(12):
        pop = random_population(stream("oracle-w", k), 1 + k % 6)
        result = optimal_nested(pop)
        assert policy_expected_cost(result.policy, pop) == pytest.approx(
            result.cost, abs=1e-12
        )


def test_merge_equivalent_same_cost():
    result = optimal_nested(BENCHMARK, merge_equivalent=True)
    assert result.cost == pytest.approx(optimal_nested(BENCHMARK).cost, abs=1e-12)


def test_equal_q_permutation_symmetry():
    a = Population.from_q([0.62, 0.65, 0.62, 0.68])
    b = Population.from_q([0.68, 0.62, 0.62, 0.65])
    assert optimal_nested(a).cost == pytest.approx(optimal_nested(b).cost, abs=1e-12)
    assert best_gpta_order(a).cost == pytest.approx(best_gpta_order(b).cost, abs=1e-12)


def test_exact_mode_benchmark():
    exact = Population.from_q(
        [Fraction("0.62"), Fraction("0.62"), Fraction("0.65"), Fraction("0.68")]
    )
    result = optimal_nested(exact)
    assert result.cost == Fraction("3.8449072")


def test_oracle_json_export_keys():
    payload = json.loads(optimal_nested(BENCHMARK).to_json())
    assert set(payload) == {"cost", "root_moves", "policy", "n", "mode"}
    assert payload["n"] == 4
    assert payload["mode"] == "float"
    assert payload["root_moves"] == 4


def test_best_gpta_order_benchmark():
    result = best_gpta_order(BENCHMARK)
    assert result.cost == pytest.approx(3.8449072, abs=1e-7)
    assert result.optimal_order_count == 4
    assert result.order.q_values == (0.68, 0.62, 0.65, 0.62)
    assert gpta_cost(result.order) == pytest.approx(result.cost, abs=1e-12)


def test_best_gpta_order_matches_exhaustive_permutations():
    for k in range(8):
        pop = random_population(stream("bgo", k), 2 + k % 4)
        brute = min(
            gpta_cost(Population(perm)) for perm in itertools.permutations(pop.units)
        )
        assert abs(best_gpta_order(pop).cost - brute) <= 1e-12


def test_best_fixed_order_benchmark():
    result = best_fixed_order(BENCHMARK)
    assert result.cost == pytest.approx(3.8454, abs=5e-5)
    assert fixed_order_optimal(result.order, build_policy=False).cost == pytest.approx(
        result.cost, abs=1e-12
    )


def test_best_fixed_order_two_units_equals_oracle():
    pop = Population.from_q([0.44, 0.81])
    assert best_fixed_order(pop).cost == pytest.approx(
        optimal_nested(pop).cost, abs=1e-12
    )


def test_sandwich_property():
    """The adaptive optimum lower-bounds both order searches."""
    for k in range(10):
        pop = random_population(stream("sandwich", k), 2 + k % 5)
        oracle_cost = optimal_nested(pop).cost
        assert oracle_cost <= best_gpta_order(pop).cost + 1e-12
        assert oracle_cost <= best_fixed_order(pop).cost + 1e-12


def test_adaptive_pairing_beats_every_fixed_order_at_seven():
    """From n = 7 upward the oracle re-pairs adaptively after a defective
    carry and undercuts every fixed-order walk; the gap is real, not
    float noise."""
    pop = sample_population(7, (R_RANGE_LO, R_RANGE_HI), derive_stream(0, 7, 0))
    gap = best_gpta_order(pop).cost - optimal_nested(pop).cost
    assert gap > 1e-6


def test_equality_holds_through_six_in_pairwise_range():
    for n in (2, 3, 4, 5, 6):
        pop = sample_population(n, (R_RANGE_LO, R_RANGE_HI), derive_stream(99, n, 0))
        gap = abs(best_gpta_order(pop).cost - optimal_nested(pop).cost)
        assert gap <= 1e-9


def test_two_unit_known_values():
    r = two_unit_optimal(0.7, 0.7)
    assert r.strategy is TwoUnitStrategy.PAIR_FIRST
    assert r.cost == pytest.approx(1.81, abs=1e-12)

    r = two_unit_optimal(0.5, 0.5)
    assert r.strategy is TwoUnitStrategy.INDIVIDUAL
    assert r.cost == pytest.approx(2.0)


def test_two_unit_golden_ratio_tie():
    r = two_unit_optimal(GOLDEN_RATIO_Q, GOLDEN_RATIO_Q)
    assert r.cost == pytest.approx(2.0, abs=1e-9)
    assert r.strategy is TwoUnitStrategy.INDIVIDUAL


def test_two_unit_rejects_bad_orientation():
    with pytest.raises(ValidationError):
        two_unit_optimal(0.3, 0.7)


def test_monotone_in_single_p():
    for k in range(6):
        pop = random_population(stream("mono", k), 2 + k % 4)
        base = optimal_nested(pop).cost
        for i, p in enumerate(pop.p_values):
            if p + 0.05 >= 1:
                continue
            bumped = Population.from_p(
                [pp + 0.05 if j == i else pp for j, pp in enumerate(pop.p_values)]
            )
            assert optimal_nested(bumped).cost >= base - 1e-12


def test_size_limits():
    with pytest.raises(SizeLimitError):
        optimal_nested(Population.from_p([0.3] * 13))
    with pytest.raises(SizeLimitError):
        optimal_nested(Population.from_p([Fraction(3, 10)] * 9))
    with pytest.raises(SizeLimitError):
        best_gpta_order(Population.from_p([0.3] * 11))
    with pytest.raises(SizeLimitError):
        best_fixed_order(Population.from_p([0.3] * 9))
