"""Optimal two-stage pooling for heterogeneous probabilities.

Each group gets one test; a positive group is retested one unit at a
time.  A singleton skips the group stage and costs exactly 1.  Over the
descending-q sorted sequence an optimal grouping is an ordered
partition, so the search space is contiguous blocks and the DP is
O(n^2):  D(i) = min over j >= i of group_cost(i..j) + D(j+1).
"""

from __future__ import annotations

import json
import math
from typing import NamedTuple

from .model import Number, Population, SizeLimitError, q_product, sort_by_q_descending

MAX_PARTITION_BRUTE_UNITS = 16


class PartitionResult(NamedTuple):
    partition: tuple[tuple[int, int], ...]
    cost: Number


def dorfman_group_cost(pop: Population, i: int, j: int) -> Number:
    """Expected tests for the group of units i..j (1-based, inclusive)."""
    q_all = q_product(pop, i, j)  # also validates the range
    size = j - i + 1
    if size == 1:
        return 1  # individual test, no group stage
    return 1 + size * (1 - q_all)


def optimal_ordered_partition(pop: Population) -> PartitionResult:
    """Cheapest ordered partition of the descending-q sorted population.

    Returned ranges are 1-based inclusive indices into
    ``sort_by_q_descending(pop)``.  Cost ties go to the shorter leading
    group.
    """
    ordered = sort_by_q_descending(pop)
    n = ordered.n
    best: list = [None] * (n + 2)
    best[n + 1] = 0
    split = [0] * (n + 2)
    for i in range(n, 0, -1):
        for j in range(i, n + 1):  # ascending: first minimum = shortest group
            cost = dorfman_group_cost(ordered, i, j) + best[j + 1]
            if best[i] is None or cost < best[i]:
                best[i], split[i] = cost, j
    ranges = []
    i = 1
    while i <= n:
        ranges.append((i, split[i]))
        i = split[i] + 1
    return PartitionResult(tuple(ranges), best[1] if n else 0.0)


def brute_force_partitions(pop: Population) -> Number:
    """Minimum cost over all 2^(n-1) ordered partitions (n <= 16)."""
    ordered = sort_by_q_descending(pop)
    n = ordered.n
    if n > MAX_PARTITION_BRUTE_UNITS:
        raise SizeLimitError(f"partition brute force needs n <= {MAX_PARTITION_BRUTE_UNITS}, got {n}")
    if n == 0:
        return 0.0
    qs = ordered.q_values
    best = None
    for boundaries in range(1 << (n - 1)):
        cost: Number = 0
        start = 0
        for end in range(n):
            if end == n - 1 or (boundaries >> end) & 1:
                size = end - start + 1
                if size == 1:
                    cost += 1
                else:
                    cost += 1 + size * (1 - math.prod(qs[start : end + 1]))
                start = end + 1
        if best is None or cost < best:
            best = cost
    return best


def partition_to_json(pop: Population) -> str:
    """Optimal partition as JSON: ranges, per-group costs, total, sorted q."""
    ordered = sort_by_q_descending(pop)
    partition, cost = optimal_ordered_partition(pop)
    group_costs = [float(dorfman_group_cost(ordered, i, j)) for i, j in partition]
    return json.dumps(
        {
            "partition": [[i, j] for i, j in partition],
            "group_costs": group_costs,
            "cost": float(cost),
            "q_sorted": [float(q) for q in ordered.q_values],
        },
        sort_keys=True,
    )
