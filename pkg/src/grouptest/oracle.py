"""Exhaustive ground truth for small populations.

Three searches live here:

* :func:`optimal_nested` - the optimal adaptive nested strategy, found
  by dynamic programming over (pool mask, contaminated mask) states.
  From a clean state any nonempty pool subset may be tested; while a
  contaminated set C is live only nonempty proper subsets of C may be,
  and a positive sub-test returns the untested remainder to the pool
  unchanged.  A contaminated singleton is defective by deduction.  The
  state space is O(3^n) and transitions are exponential in the state
  size, hence the hard size caps.
* :func:`best_gpta_order` / :func:`best_fixed_order` - minimize the
  pairwise walk or the fixed-order DP over all distinct arrangements of
  the q multiset (duplicate values generate identical costs and are
  enumerated once).
* :func:`two_unit_optimal` - the closed-form two-unit answer, where the
  best nested strategy is also the best strategy outright.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional

from .model import (
    Mode,
    Number,
    Population,
    SizeLimitError,
    TOLERANCE,
    ValidationError,
)
from .nested_dp import _dp_tables
from .policy import LEAF, PolicyTree, TestNode, serialize_policy

MAX_ORACLE_UNITS_FLOAT = 12
MAX_ORACLE_UNITS_EXACT = 8
MAX_GPTA_SEARCH_UNITS = 10
MAX_FIXED_SEARCH_UNITS = 8


class TwoUnitStrategy(enum.Enum):
    INDIVIDUAL = "individual"
    PAIR_FIRST = "pair_first"


class TwoUnitResult(NamedTuple):
    cost: Number
    strategy: TwoUnitStrategy


class BestOrderResult(NamedTuple):
    order: Population
    cost: Number
    optimal_order_count: int


class BestFixedOrderResult(NamedTuple):
    order: Population
    cost: Number


@dataclass(frozen=True)
class OracleResult:
    cost: Number
    policy: PolicyTree
    optimal_first_moves: int
    n: int
    mode: Mode

    def to_json(self) -> str:
        cost = str(self.cost) if self.mode is Mode.EXACT else float(self.cost)
        return json.dumps(
            {
                "cost": cost,
                "root_moves": self.optimal_first_moves,
                "policy": serialize_policy(self.policy),
                "n": self.n,
                "mode": self.mode.value,
            },
            sort_keys=True,
        )


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def optimal_nested(pop: Population, *, merge_equivalent: bool = False) -> OracleResult:
    """Exact optimum over all adaptive nested strategies.

    Returns the cost, a witness policy (deterministic: cost ties go to
    the smallest test set, then the lowest bitmask), and the number of
    root tests whose cost is within tolerance of the optimum, a cheap
    proxy for uniqueness.  ``merge_equivalent`` keys the cost memo by q
    multisets instead of id masks, collapsing states that differ only by
    swaps of equal-q units.
    """
    n = pop.n
    exact = pop.mode is Mode.EXACT
    limit = MAX_ORACLE_UNITS_EXACT if exact else MAX_ORACLE_UNITS_FLOAT
    if n > limit:
        raise SizeLimitError(
            f"adaptive oracle needs n <= {limit} in {pop.mode.value} mode, got {n}"
        )
    zero: Number = Fraction(0) if exact else 0.0
    tolerance = 0 if exact else TOLERANCE
    qs = [u.q for u in pop.units]
    uids = [u.uid for u in pop.units]
    full = (1 << n) - 1

    q_of_mask: list = [1] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        q_of_mask[mask] = q_of_mask[mask ^ low] * qs[low.bit_length() - 1]

    canon_cache: dict[int, tuple] = {0: ()}

    def canon(mask: int) -> tuple:
        cached = canon_cache.get(mask)
        if cached is None:
            cached = tuple(sorted(qs[b] for b in _bits(mask)))
            canon_cache[mask] = cached
        return cached

    memo: dict = {}

    def moves(pool: int, cont: int) -> Iterator[tuple[int, Number]]:
        """Each legal test set with its resulting expected cost."""
        if cont == 0:
            tested = pool
            while tested:
                rest = pool ^ tested
                yield tested, 1 + q_of_mask[tested] * cost_of(rest, 0) + (
                    1 - q_of_mask[tested]
                ) * cost_of(rest, tested)
                tested = (tested - 1) & pool
        else:
            denom = 1 - q_of_mask[cont]
            tested = (cont - 1) & cont  # proper nonempty subsets only
            while tested:
                rest = cont ^ tested
                p_neg = q_of_mask[tested] * (1 - q_of_mask[rest]) / denom
                p_pos = (1 - q_of_mask[tested]) / denom
                yield tested, 1 + p_neg * cost_of(pool, rest) + p_pos * cost_of(
                    pool | rest, tested
                )
                tested = (tested - 1) & cont

    def cost_of(pool: int, cont: int) -> Number:
        if cont and cont & (cont - 1) == 0:
            cont = 0  # contaminated singleton: defective by deduction
        if pool == 0 and cont == 0:
            return zero
        key = (canon(pool), canon(cont)) if merge_equivalent else (pool, cont)
        cached = memo.get(key)
        if cached is None:
            cached = min(cost for _, cost in moves(pool, cont))
            memo[key] = cached
        return cached

    total = cost_of(full, 0)

    built: dict[tuple[int, int], PolicyTree] = {}

    def build(pool: int, cont: int) -> PolicyTree:
        if cont and cont & (cont - 1) == 0:
            cont = 0
        if pool == 0 and cont == 0:
            return LEAF
        key = (pool, cont)
        cached = built.get(key)
        if cached is not None:
            return cached
        options = list(moves(pool, cont))
        best = min(cost for _, cost in options)
        tested = min(
            (t for t, cost in options if cost == best),
            key=lambda t: (t.bit_count(), t),
        )
        if cont == 0:
            node = TestNode(
                frozenset(uids[b] for b in _bits(tested)),
                build(pool ^ tested, 0),
                build(pool ^ tested, tested),
            )
        else:
            rest = cont ^ tested
            node = TestNode(
                frozenset(uids[b] for b in _bits(tested)),
                build(pool, rest),
                build(pool | rest, tested),
            )
        built[key] = node
        return node

    policy = build(full, 0)
    if n == 0:
        first_moves = 0
    else:
        first_moves = sum(1 for _, cost in moves(full, 0) if cost <= total + tolerance)
    return OracleResult(total, policy, first_moves, n, pop.mode)


def _value_arrangements(sorted_values: tuple) -> Iterator[tuple]:
    """Distinct arrangements of a multiset, largest-first at each slot."""
    counts: dict = {}
    for value in sorted_values:
        counts[value] = counts.get(value, 0) + 1
    distinct = list(counts)
    slot: list = []
    total = len(sorted_values)

    def rec() -> Iterator[tuple]:
        if len(slot) == total:
            yield tuple(slot)
            return
        for value in distinct:
            if counts[value]:
                counts[value] -= 1
                slot.append(value)
                yield from rec()
                slot.pop()
                counts[value] += 1

    return rec()


def _arrange_units(pop: Population, values: tuple) -> Population:
    buckets: dict = {}
    for unit in pop.units:
        buckets.setdefault(unit.q, []).append(unit)
    return Population(tuple(buckets[q].pop(0) for q in values))


def _gpta_value_cost(seq: tuple, memo: dict, zero: Number, one: Number) -> Number:
    """Pairwise-walk cost of a q sequence, memo shared across sequences."""

    def ev(carry, rest: tuple) -> Number:
        key = (carry, rest)
        cached = memo.get(key)
        if cached is not None:
            return cached
        remaining = (carry is not None) + len(rest)
        if remaining == 0:
            value = zero
        elif remaining == 1:
            value = one
        else:
            if carry is not None:
                q_u, q_v, rest2 = carry, rest[0], rest[1:]
            else:
                q_u, q_v, rest2 = rest[0], rest[1], rest[2:]
            q_a, q_b = (q_u, q_v) if q_u >= q_v else (q_v, q_u)
            value = 2 - q_u * q_v + q_a * ev(None, rest2) + (1 - q_a) * ev(q_b, rest2)
        memo[key] = value
        return value

    return ev(None, seq)


def best_gpta_order(pop: Population) -> BestOrderResult:
    """Minimize the pairwise walk over all distinct orders (n <= 10).

    Returns the first minimizing order in largest-first enumeration,
    its cost, and how many distinct orders attain the minimum within
    tolerance.
    """
    n = pop.n
    if n == 0:
        raise ValidationError("population must be nonempty")
    if n > MAX_GPTA_SEARCH_UNITS:
        raise SizeLimitError(f"order search needs n <= {MAX_GPTA_SEARCH_UNITS}, got {n}")
    exact = pop.mode is Mode.EXACT
    zero: Number = Fraction(0) if exact else 0.0
    one: Number = Fraction(1) if exact else 1.0
    tolerance = 0 if exact else TOLERANCE
    values = tuple(sorted(pop.q_values, reverse=True))
    memo: dict = {}

    best = None
    best_values: Optional[tuple] = None
    for arrangement in _value_arrangements(values):
        cost = _gpta_value_cost(arrangement, memo, zero, one)
        if best is None or cost < best:
            best, best_values = cost, arrangement
    count = sum(
        1
        for arrangement in _value_arrangements(values)
        if _gpta_value_cost(arrangement, memo, zero, one) <= best + tolerance
    )
    return BestOrderResult(_arrange_units(pop, best_values), best, count)


def best_fixed_order(pop: Population) -> BestFixedOrderResult:
    """Minimize the fixed-order DP over all distinct orders (n <= 8)."""
    n = pop.n
    if n == 0:
        raise ValidationError("population must be nonempty")
    if n > MAX_FIXED_SEARCH_UNITS:
        raise SizeLimitError(f"order search needs n <= {MAX_FIXED_SEARCH_UNITS}, got {n}")
    exact = pop.mode is Mode.EXACT
    values = tuple(sorted(pop.q_values, reverse=True))
    best = None
    best_values: Optional[tuple] = None
    for arrangement in _value_arrangements(values):
        cost = _dp_tables(list(arrangement), exact)[0][1]
        if best is None or cost < best:
            best, best_values = cost, arrangement
    return BestFixedOrderResult(_arrange_units(pop, best_values), best)


def two_unit_optimal(q_a: Number, q_b: Number) -> TwoUnitResult:
    """Closed-form optimum for two units (q_a >= q_b).

    Pair-first expects q_a*q_b + 2*q_a*(1-q_b) + 3*(1-q_a) tests,
    individual testing exactly 2; pair-first wins iff
    q_a + q_a*q_b > 1.  Ties report INDIVIDUAL.
    """
    for name, q in (("q_a", q_a), ("q_b", q_b)):
        if not (0 < q < 1):
            raise ValidationError(f"{name}={q} outside the open interval (0, 1)")
    if q_a < q_b:
        raise ValidationError("pair must be oriented with q_a >= q_b")
    pair_first = q_a * q_b + 2 * q_a * (1 - q_b) + 3 * (1 - q_a)
    two: Number = Fraction(2) if isinstance(q_a, Fraction) else 2.0
    if q_a + q_a * q_b > 1:
        return TwoUnitResult(pair_first, TwoUnitStrategy.PAIR_FIRST)
    return TwoUnitResult(min(pair_first, two), TwoUnitStrategy.INDIVIDUAL)
