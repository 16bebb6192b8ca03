"""Optimal nested strategy for a fixed unit order.

The strategy class: every test is a contiguous prefix of the not-yet-
classified sequence.  After a positive prefix test inside a contaminated
run, the untested remainder of the run reverts to its prior Bernoulli
distribution and re-enters the sequence at the front, so the live state
is always describable by two indices.  With Q(i,j) the product of q over
units i..j, the optimal costs satisfy::

    G(i)   = min over k in i..n of
             1 + Q(i,k)*G(k+1) + (1 - Q(i,k))*H(i,k),      G(n+1) = 0
    H(i,i) = G(i+1)
    H(i,j) = 1 + min over m in i..j-1 of
             Q(i,m)*(1 - Q(m+1,j))/(1 - Q(i,j)) * H(m+1,j)
             + (1 - Q(i,m))/(1 - Q(i,j))        * H(i,m)    for j > i

G(i) is the cost with the binomial suffix i..n left; H(i,j) the cost
with contaminated run i..j ahead of binomial suffix j+1..n.  Computing
all tables is O(n^3) time, O(n^2) memory.  Ties in either argmin go to
the smallest group, then the smaller start index, making policies
deterministic.

The cost-only float path rescales the tables as Hh(i,j) =
(P(i-1) - P(j))*H(i,j) and Gh(i) = P(i-1)*G(i) (P = prefix products of
q), which cancels every conditional denominator and reduces the inner
loop to adds and minima over array slices.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Optional, Union

import numpy as np

from .model import Mode, Number, Population, SizeLimitError, ValidationError
from .policy import (
    LEAF,
    Leaf,
    PolicyError,
    PolicyTree,
    TestNode,
    max_test_size,
    parse_policy,
    policy_expected_cost,
    serialize_policy,
    validate_policy,
)

__all__ = [
    "FixedOrderResult",
    "fixed_order_optimal",
    "policy_expected_cost",
    "brute_force_order_respecting",
    "individual_testing_sufficient",
    "LEAF",
    "Leaf",
    "PolicyError",
    "PolicyTree",
    "TestNode",
    "max_test_size",
    "parse_policy",
    "serialize_policy",
    "validate_policy",
]

MAX_BRUTE_FORCE_UNITS = 5

# Below this size the generic path is already fast; above it the float
# cost-only path switches to the vectorized tables.
_NUMPY_MIN_N = 30


class FixedOrderResult(NamedTuple):
    cost: Number
    policy: Optional[PolicyTree]


def _dp_tables(qs: list, exact: bool):
    """Cost tables plus argmin choices for the G/H recursion (1-based)."""
    n = len(qs)
    prefix: list = [1] * (n + 1)
    for i in range(1, n + 1):
        prefix[i] = prefix[i - 1] * qs[i - 1]

    def q_range(i: int, j: int) -> Number:
        return prefix[j] / prefix[i - 1]

    zero: Number = Fraction(0) if exact else 0.0
    g: list = [None] * (n + 2)
    g[n + 1] = zero
    g_choice = [0] * (n + 2)
    h: dict[tuple[int, int], Number] = {}
    h_choice: dict[tuple[int, int], int] = {}

    for i in range(n, 0, -1):
        h[(i, i)] = g[i + 1]
        for j in range(i + 1, n + 1):
            denom = 1 - q_range(i, j)
            best = None
            best_m = i
            for m in range(i, j):  # ascending: first minimum = shortest prefix
                split = (
                    q_range(i, m) * (1 - q_range(m + 1, j)) / denom * h[(m + 1, j)]
                    + (1 - q_range(i, m)) / denom * h[(i, m)]
                )
                if best is None or split < best:
                    best, best_m = split, m
            h[(i, j)] = 1 + best
            h_choice[(i, j)] = best_m
        best = None
        best_k = i
        for k in range(i, n + 1):  # ascending: first minimum = smallest group
            total = 1 + q_range(i, k) * g[k + 1] + (1 - q_range(i, k)) * h[(i, k)]
            if best is None or total < best:
                best, best_k = total, k
        g[i] = best
        g_choice[i] = best_k
    return g, g_choice, h_choice


def _cost_only_numpy(qs: list[float]) -> float:
    """Float DP over the rescaled tables; returns the optimal cost only."""
    n = len(qs)
    prefix = np.empty(n + 1)
    prefix[0] = 1.0
    np.cumprod(qs, out=prefix[1:])
    hh = np.zeros((n, n))
    gh = np.zeros(n + 1)
    for i in range(n - 1, -1, -1):
        hh[i, i] = (prefix[i] - prefix[i + 1]) * gh[i + 1] / prefix[i + 1]
        row = hh[i]
        for j in range(i + 1, n):
            row[j] = (prefix[i] - prefix[j + 1]) + np.min(hh[i + 1 : j + 1, j] + row[i:j])
        gh[i] = prefix[i] + np.min(gh[i + 1 : n + 1] + row[i:n])
    return float(gh[0])


def _build_policy(order: Population, g_choice: list, h_choice: dict) -> PolicyTree:
    """Materialize the argmin choices as a policy DAG, iteratively."""
    units = order.units
    n = len(units)

    def ids(i: int, j: int) -> frozenset[int]:
        return frozenset(u.uid for u in units[i - 1 : j])

    def normalize(key: tuple) -> tuple:
        # a contaminated singleton is deduced, not tested
        while key[0] == "H" and key[1] == key[2]:
            key = ("G", key[1] + 1)
        return key

    def children(key: tuple) -> tuple[tuple, tuple, frozenset[int]]:
        if key[0] == "G":
            i = key[1]
            k = g_choice[i]
            return normalize(("G", k + 1)), normalize(("H", i, k)), ids(i, k)
        _, i, j = key
        m = h_choice[(i, j)]
        return normalize(("H", m + 1, j)), normalize(("H", i, m)), ids(i, m)

    built: dict[tuple, PolicyTree] = {("G", n + 1): LEAF}
    root = normalize(("G", 1))
    stack = [root]
    while stack:
        key = stack[-1]
        if key in built:
            stack.pop()
            continue
        neg_key, pos_key, tested = children(key)
        missing = [k for k in (neg_key, pos_key) if k not in built]
        if missing:
            stack.extend(missing)
            continue
        built[key] = TestNode(tested, built[neg_key], built[pos_key])
        stack.pop()
    return built[root]


def fixed_order_optimal(order: Population, *, build_policy: bool = True) -> FixedOrderResult:
    """Minimum expected cost over the fixed-order nested class, with an
    attaining policy (pass ``build_policy=False`` to skip the tree and
    unlock the vectorized large-n path)."""
    n = order.n
    if n == 0:
        raise ValidationError("order must be nonempty")
    if not build_policy and order.mode is Mode.FLOAT and n >= _NUMPY_MIN_N:
        return FixedOrderResult(_cost_only_numpy([float(q) for q in order.q_values]), None)
    g, g_choice, h_choice = _dp_tables(list(order.q_values), order.mode is Mode.EXACT)
    policy = _build_policy(order, g_choice, h_choice) if build_policy else None
    return FixedOrderResult(g[1], policy)


def brute_force_order_respecting(order: Population) -> Number:
    """Exhaustive minimization over the same strategy class (n <= 5).

    Works on explicit q sequences with per-state probability products,
    sharing no code or tables with the DP, so it is an independent
    witness for the recursion above.
    """
    n = order.n
    if n == 0:
        raise ValidationError("order must be nonempty")
    if n > MAX_BRUTE_FORCE_UNITS:
        raise SizeLimitError(f"brute force needs n <= {MAX_BRUTE_FORCE_UNITS}, got {n}")

    def pool_cost(pool: tuple) -> Number:
        if not pool:
            return 0
        best = None
        for k in range(1, len(pool) + 1):
            head, rest = pool[:k], pool[k:]
            q_head = math.prod(head)
            cost = 1 + q_head * pool_cost(rest) + (1 - q_head) * run_cost(head, rest)
            if best is None or cost < best:
                best = cost
        return best

    def run_cost(run: tuple, pool: tuple) -> Number:
        if len(run) == 1:
            return pool_cost(pool)  # defective by deduction, no test spent
        best = None
        for m in range(1, len(run)):
            head, rest = run[:m], run[m:]
            q_head, q_rest = math.prod(head), math.prod(rest)
            denom = 1 - q_head * q_rest
            p_neg = q_head * (1 - q_rest) / denom
            p_pos = (1 - q_head) / denom
            cost = 1 + p_neg * run_cost(rest, pool) + p_pos * run_cost(head, rest + pool)
            if best is None or cost < best:
                best = cost
        return best

    return pool_cost(tuple(order.q_values))


def individual_testing_sufficient(pop: Population) -> bool:
    """True when one-at-a-time testing is already optimal (sufficient,
    not necessary): with q sorted descending, q1 + q1*q2 < 1."""
    if pop.n <= 1:
        return True
    qs = sorted(pop.q_values, reverse=True)
    return qs[0] + qs[0] * qs[1] < 1
