"""Pairwise testing over a fixed unit order.

The procedure walks the order two units at a time.  The current pair
{u, v} is tested together:

* negative: both units are good; move to the next pair.
* positive: the pair is contaminated.  Test the member with the larger q
  individually (call it ``a``; ties go to the unit earlier in the
  current sequence).  If ``a`` is good, its partner is defective by
  deduction and the walk continues.  If ``a`` is defective, the untested
  partner reverts to its prior Bernoulli distribution, moves to the head
  of the remaining order, and is paired with the next unit.

A final unpaired unit is tested individually.  The expected total cost
obeys, for a sequence s starting with u, v and continuing with `tail`::

    E(s) = 2 - q_u*q_v + q_a*E(tail) + (1 - q_a)*E(b + tail)
    E(empty) = 0,  E(single) = 1

where (a, b) is the pair ordered by descending q.  The walk's state is
just (reverted unit or none, position in the order), so the expectation
is computed by memoizing over those states: O(n) of them when pair
winners are stable, O(n^2) worst case.

Trace events (one per line): ``TEST 1,2 -> NEG``, ``TEST 1 -> POS``,
``DEDUCE 2 DEFECTIVE``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .model import (
    Mode,
    Number,
    Population,
    SizeLimitError,
    Unit,
    ValidationError,
)
from .policy import LEAF, PolicyTree, TestNode
from .rng import GOLDEN64, mix64, mix64_np

MAX_POLICY_UNITS = 16
MAX_ENUMERATION_UNITS = 14


class ExecutionResult(NamedTuple):
    tests_used: int
    classification: tuple[bool, ...]
    trace: tuple[str, ...]


class MonteCarloResult(NamedTuple):
    mean: float
    stderr: float


@dataclass(frozen=True)
class PairComparison:
    """Expected totals for the two ways to resolve a contaminated pair.

    e_a tests the larger-q member first, e_b the smaller-q member.
    Testing the larger-q member first never costs more: e_a <= e_b.
    """

    q_a: Number
    q_b: Number
    e_a: Number
    e_b: Number


def _pair_indices(
    units: tuple[Unit, ...], carry: Optional[int], pos: int
) -> tuple[int, int, int, int, int]:
    """Current pair (u, v), its descending-q orientation (a, b), and the
    number of order positions the pair consumes."""
    if carry is not None:
        u_idx, v_idx, adv = carry, pos, 1
    else:
        u_idx, v_idx, adv = pos, pos + 1, 2
    if units[u_idx].q >= units[v_idx].q:  # tie: earlier unit in the sequence
        return u_idx, v_idx, u_idx, v_idx, adv
    return u_idx, v_idx, v_idx, u_idx, adv


def gpta_cost(order: Population) -> Number:
    """Exact expected number of tests over the given order."""
    units = order.units
    n = len(units)
    exact = order.mode is Mode.EXACT
    zero: Number = Fraction(0) if exact else 0.0
    one: Number = Fraction(1) if exact else 1.0
    if n == 0:
        return zero

    # Discover the reachable (reverted unit, position) states, then fold
    # costs from the back of the order; both successors of any state sit
    # strictly deeper, so descending position order is a valid schedule.
    states: list[tuple[Optional[int], int]] = []
    seen: set[tuple[Optional[int], int]] = set()
    stack: list[tuple[Optional[int], int]] = [(None, 0)]
    while stack:
        state = stack.pop()
        if state in seen:
            continue
        seen.add(state)
        states.append(state)
        carry, pos = state
        remaining = (carry is not None) + (n - pos)
        if remaining >= 2:
            _, _, _, b_idx, adv = _pair_indices(units, carry, pos)
            stack.append((None, pos + adv))
            stack.append((b_idx, pos + adv))

    value: dict[tuple[Optional[int], int], Number] = {}
    for carry, pos in sorted(states, key=lambda s: s[1], reverse=True):
        remaining = (carry is not None) + (n - pos)
        if remaining == 0:
            cost = zero
        elif remaining == 1:
            cost = one
        else:
            u_idx, v_idx, a_idx, b_idx, adv = _pair_indices(units, carry, pos)
            q_u, q_v, q_a = units[u_idx].q, units[v_idx].q, units[a_idx].q
            cost = (
                2
                - q_u * q_v
                + q_a * value[(None, pos + adv)]
                + (1 - q_a) * value[(b_idx, pos + adv)]
            )
        value[(carry, pos)] = cost
    return value[(None, 0)]


def gpta_policy(order: Population) -> PolicyTree:
    """Explicit decision tree for the procedure (n <= 16)."""
    n = order.n
    if n > MAX_POLICY_UNITS:
        raise SizeLimitError(f"policy tree needs n <= {MAX_POLICY_UNITS}, got {n}")
    units = order.units
    memo: dict[tuple[Optional[int], int], PolicyTree] = {}

    def node(carry: Optional[int], pos: int) -> PolicyTree:
        key = (carry, pos)
        if key in memo:
            return memo[key]
        remaining = (carry is not None) + (n - pos)
        if remaining == 0:
            built: PolicyTree = LEAF
        elif remaining == 1:
            idx = carry if carry is not None else pos
            built = TestNode(frozenset({units[idx].uid}), LEAF, LEAF)
        else:
            u_idx, v_idx, a_idx, b_idx, adv = _pair_indices(units, carry, pos)
            follow = node(None, pos + adv)
            # positive pair: test a alone; a good deduces its partner and
            # rejoins the main walk, a defective carries the partner.
            inner = TestNode(frozenset({units[a_idx].uid}), follow, node(b_idx, pos + adv))
            built = TestNode(frozenset({units[u_idx].uid, units[v_idx].uid}), follow, inner)
        memo[key] = built
        return built

    return node(None, 0)


def gpta_execute(order: Population, defects: tuple[bool, ...]) -> ExecutionResult:
    """Run the procedure against a realized defect vector.

    ``defects`` aligns with the order's unit sequence.  The returned
    classification always equals the input vector; the trace records
    each test and deduction.
    """
    units = order.units
    n = len(units)
    if len(defects) != n:
        raise ValidationError(f"defect vector length {len(defects)} != population size {n}")
    classification: list[bool] = [False] * n
    trace: list[str] = []
    tests = 0
    carry: Optional[int] = None
    pos = 0
    while True:
        remaining = (carry is not None) + (n - pos)
        if remaining == 0:
            break
        if remaining == 1:
            idx = carry if carry is not None else pos
            outcome = bool(defects[idx])
            tests += 1
            trace.append(f"TEST {units[idx].uid} -> {'POS' if outcome else 'NEG'}")
            classification[idx] = outcome
            carry = None
            pos = n
            continue
        u_idx, v_idx, a_idx, b_idx, adv = _pair_indices(units, carry, pos)
        pair_ids = ",".join(str(i) for i in sorted((units[u_idx].uid, units[v_idx].uid)))
        tests += 1
        if not (defects[u_idx] or defects[v_idx]):
            trace.append(f"TEST {pair_ids} -> NEG")
            classification[u_idx] = classification[v_idx] = False
            carry = None
        else:
            trace.append(f"TEST {pair_ids} -> POS")
            tests += 1
            if defects[a_idx]:
                trace.append(f"TEST {units[a_idx].uid} -> POS")
                classification[a_idx] = True
                carry = b_idx
            else:
                trace.append(f"TEST {units[a_idx].uid} -> NEG")
                trace.append(f"DEDUCE {units[b_idx].uid} DEFECTIVE")
                classification[a_idx] = False
                classification[b_idx] = True
                carry = None
        pos += adv
    return ExecutionResult(tests, tuple(classification), tuple(trace))


def gpta_expected_by_enumeration(order: Population) -> Number:
    """Average executor cost over all 2^n defect vectors (n <= 14)."""
    n = order.n
    if n > MAX_ENUMERATION_UNITS:
        raise SizeLimitError(f"enumeration needs n <= {MAX_ENUMERATION_UNITS}, got {n}")
    exact = order.mode is Mode.EXACT
    total: Number = Fraction(0) if exact else 0.0
    for defects in itertools.product((False, True), repeat=n):
        weight = math.prod(u.p if d else u.q for u, d in zip(order.units, defects))
        total += weight * gpta_execute(order, defects).tests_used
    return total


def gpta_monte_carlo(order: Population, trials: int, seed: int) -> MonteCarloResult:
    """Sample mean and standard error of the test count.

    Trial t draws unit j's status from the stream derived from
    (seed, t): defective iff the j-th uniform is below p_j.  Each trial
    is reproducible in isolation, so the result does not depend on
    execution order or parallelism.  Sampling is always double
    precision, also for exact-mode populations.
    """
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    n = order.n
    if n == 0:
        return MonteCarloResult(0.0, 0.0)
    ps = np.array([float(u.p) for u in order.units], dtype=np.float64)
    base = np.uint64(mix64(seed))
    golden = np.uint64(GOLDEN64)
    chunk = max(1, (1 << 23) // max(n, 8))

    def trial_seeds(start: int, stop: int) -> np.ndarray:
        t = np.arange(start, stop, dtype=np.uint64)
        return mix64_np(base ^ ((t + np.uint64(1)) * golden))

    def unit_uniforms(tseeds: np.ndarray, j: int) -> np.ndarray:
        # Fold j into the trial seed; the 64-bit wrap is intentional, so
        # compute the scalar offset in python ints (numpy warns on
        # wrapping scalars, but not on wrapping arrays).
        offset = np.uint64(((j + 1) * GOLDEN64) & ((1 << 64) - 1))
        draw = mix64_np(tseeds + offset)
        return (draw >> np.uint64(11)).astype(np.float64) * 2.0**-53

    if n <= 16:
        # Pattern table: bucket trials by defect pattern, execute each
        # observed pattern once.
        counts = np.zeros(1 << n, dtype=np.int64)
        for start in range(0, trials, chunk):
            stop = min(start + chunk, trials)
            tseeds = trial_seeds(start, stop)
            codes = np.zeros(stop - start, dtype=np.int64)
            for j in range(n):
                codes |= (unit_uniforms(tseeds, j) < ps[j]).astype(np.int64) << j
            counts += np.bincount(codes, minlength=1 << n)
        costs = np.zeros(1 << n, dtype=np.float64)
        for code in np.nonzero(counts)[0]:
            defects = tuple(bool((int(code) >> j) & 1) for j in range(n))
            costs[code] = gpta_execute(order, defects).tests_used
        total = float(counts @ costs)
        total_sq = float(counts @ (costs * costs))
    else:
        total = 0.0
        total_sq = 0.0
        for start in range(0, trials, chunk):
            stop = min(start + chunk, trials)
            tseeds = trial_seeds(start, stop)
            block = np.empty((stop - start, n), dtype=bool)
            for j in range(n):
                block[:, j] = unit_uniforms(tseeds, j) < ps[j]
            for row in block:
                used = gpta_execute(order, tuple(map(bool, row))).tests_used
                total += used
                total_sq += used * used

    mean = total / trials
    if trials > 1:
        variance = max(total_sq - trials * mean * mean, 0.0) / (trials - 1)
        stderr = math.sqrt(variance / trials)
    else:
        stderr = 0.0
    return MonteCarloResult(mean, stderr)


def pair_resolution_comparison(
    q_a: Number, q_b: Number, continuation: Population
) -> PairComparison:
    """Expected totals for resolving a contaminated pair either way.

    The pair is tested, then one member individually; the walk then
    continues into ``continuation`` (with the reverted partner at its
    head when the tested member was defective).  e_a tests the larger-q
    member first, e_b the smaller-q member.  The scalars must be in
    (0, 1), oriented q_a >= q_b, and match the continuation's numeric
    mode.
    """
    for name, q in (("q_a", q_a), ("q_b", q_b)):
        if not (0 < q < 1):
            raise ValidationError(f"{name}={q} outside the open interval (0, 1)")
    if q_a < q_b:
        raise ValidationError("pair must be oriented with q_a >= q_b")
    next_uid = max((u.uid for u in continuation.units), default=0)
    unit_a = Unit(next_uid + 1, 1 - q_a)
    unit_b = Unit(next_uid + 2, 1 - q_b)
    tail = gpta_cost(continuation)
    with_b = gpta_cost(Population((unit_b,) + continuation.units))
    with_a = gpta_cost(Population((unit_a,) + continuation.units))
    e_a = 2 - q_a * q_b + q_a * tail + (1 - q_a) * with_b
    e_b = 2 - q_a * q_b + q_b * tail + (1 - q_b) * with_a
    return PairComparison(q_a=q_a, q_b=q_b, e_a=e_a, e_b=e_b)
