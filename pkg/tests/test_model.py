"""Population parsing, probability helpers, and the R-range predicate."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from grouptest import (
    Mode,
    Population,
    R_RANGE_HI,
    R_RANGE_LO,
    Unit,
    ValidationError,
    ValueKind,
    parse_population,
    q_product,
    r_range_contains,
    sort_by_q_descending,
)

probs = st.floats(min_value=0.01, max_value=0.99, allow_nan=False)


def test_parse_q_values_comma_separated():
    pop = parse_population("0.68,0.65,0.62,0.62", ValueKind.Q_VALUES)
    assert pop.q_values == (0.68, 0.65, 0.62, 0.62)
    assert pop.p_values == pytest.approx((0.32, 0.35, 0.38, 0.38))
    assert [u.uid for u in pop.units] == [1, 2, 3, 4]


def test_parse_p_values_single():
    pop = parse_population("0.5", ValueKind.P_VALUES)
    assert pop.n == 1
    assert pop.units[0].p == 0.5


def test_parse_newlines_and_comments():
    text = "# header comment\n0.3\n\n0.4, 0.5\n"
    pop = parse_population(text, ValueKind.P_VALUES)
    assert pop.p_values == (0.3, 0.4, 0.5)


def test_parse_rejects_boundary_value():
    with pytest.raises(ValidationError):
        parse_population("1.0", ValueKind.P_VALUES)
    with pytest.raises(ValidationError):
        parse_population("0.0", ValueKind.Q_VALUES)


def test_parse_error_names_position():
    with pytest.raises(ValidationError, match="3"):
        parse_population("0.3,0.4,oops", ValueKind.P_VALUES)
    with pytest.raises(ValidationError, match="2"):
        parse_population("0.3,1.5", ValueKind.P_VALUES)


def test_parse_exact_mode_is_rational():
    pop = parse_population("0.62", ValueKind.Q_VALUES, Mode.EXACT)
    assert pop.q_values == (Fraction(62, 100),)
    assert pop.mode is Mode.EXACT


def test_population_rejects_duplicate_ids():
    with pytest.raises(ValidationError):
        Population((Unit(1, 0.3), Unit(1, 0.4)))


def test_population_rejects_mixed_scalar_types():
    with pytest.raises(ValidationError):
        Population((Unit(1, 0.3), Unit(2, Fraction(1, 3))))


def test_q_product_known_values():
    pop = Population.from_q([0.68, 0.65])
    assert q_product(pop, 1, 2) == pytest.approx(0.442, abs=1e-12)
    assert q_product(pop, 2, 2) == 0.65

    pop4 = Population.from_q([0.62, 0.62, 0.68, 0.65])
    # 62*62*68*65 = 16990480, so the full product is 0.1699048 exactly
    assert q_product(pop4, 1, 4) == pytest.approx(0.1699048, abs=1e-12)


def test_q_product_exact_mode():
    pop = Population.from_q([Fraction("0.62"), Fraction("0.62"), Fraction("0.68"), Fraction("0.65")])
    assert q_product(pop, 1, 4) == Fraction("0.1699048")


def test_q_product_index_errors():
    pop = Population.from_q([0.5, 0.5])
    for i, j in ((0, 1), (1, 3), (2, 1)):
        with pytest.raises(IndexError):
            q_product(pop, i, j)


def test_r_range_contains():
    assert r_range_contains(0.35)
    assert r_range_contains(0.38)
    assert not r_range_contains(0.39)
    assert r_range_contains(R_RANGE_LO)
    assert r_range_contains(R_RANGE_HI)
    assert not r_range_contains(0.29)


def test_r_range_rejects_nonprobability():
    with pytest.raises(ValidationError):
        r_range_contains(0.0)
    with pytest.raises(ValidationError):
        r_range_contains(1.0)


def test_sort_by_q_descending_is_stable():
    pop = Population.from_q([0.62, 0.62, 0.65, 0.68])
    ordered = sort_by_q_descending(pop)
    assert ordered.q_values == (0.68, 0.65, 0.62, 0.62)
    # the two equal-q units keep their original relative order
    assert [u.uid for u in ordered.units] == [4, 3, 1, 2]


def test_sort_idempotent_and_identity_on_ties():
    ordered = sort_by_q_descending(Population.from_q([0.68, 0.65, 0.62]))
    assert sort_by_q_descending(ordered).units == ordered.units
    equal = Population.from_q([0.5, 0.5, 0.5])
    assert [u.uid for u in sort_by_q_descending(equal).units] == [1, 2, 3]


def test_unit_q_complement():
    u = Unit(7, 0.3)
    assert u.q == pytest.approx(0.7)


def test_empty_population_mode_defaults_to_float():
    pop = Population(())
    assert pop.n == 0
    assert pop.mode is Mode.FLOAT


@given(st.lists(probs, min_size=1, max_size=12))
def test_parse_round_trip(ps):
    text = ",".join(repr(p) for p in ps)
    pop = parse_population(text, ValueKind.P_VALUES)
    assert pop.p_values == tuple(ps)


@given(st.lists(probs, min_size=1, max_size=12))
def test_sort_is_permutation_with_descending_q(ps):
    pop = Population.from_p(ps)
    ordered = sort_by_q_descending(pop)
    assert sorted(u.uid for u in ordered.units) == list(range(1, len(ps) + 1))
    qs = ordered.q_values
    assert all(qs[i] >= qs[i + 1] for i in range(len(qs) - 1))


@given(st.lists(probs, min_size=1, max_size=10), st.data())
def test_q_product_matches_direct_multiplication(ps, data):
    pop = Population.from_p(ps)
    i = data.draw(st.integers(1, pop.n))
    j = data.draw(st.integers(i, pop.n))
    direct = 1.0
    for t in range(i, j + 1):
        direct *= pop.units[t - 1].q
    assert q_product(pop, i, j) == pytest.approx(direct, abs=1e-12)
