"""Explicit testing strategies as decision trees.

A policy is either LEAF (every unit classified) or a TEST node naming a
set of unit ids with two children: ``neg`` for a clean test and ``pos``
for a test that found at least one defective.  Evaluation tracks two
disjoint unit sets:

* the binomial pool: units carrying their prior Bernoulli distribution;
* the contaminated set: units known, jointly, to contain a defective.

While a contaminated set is live, a node must test a nonempty proper
subset of it; a positive sub-test contaminates the tested subset and
returns the rest to the pool unchanged, a negative sub-test clears the
tested subset.  A contaminated singleton needs no test: it is defective
by deduction and simply drops out.  Nodes reached with no contamination
test any nonempty pool subset.

Serialized form (canonical, round-trips exactly)::

    (TEST 1,2 NEG=LEAF POS=(TEST 1 NEG=LEAF POS=LEAF))

ids are sorted ascending and comma-separated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .model import Number, Population, ValidationError


class PolicyError(ValidationError):
    """Malformed policy: bad syntax or a structurally illegal test."""


@dataclass(frozen=True)
class Leaf:
    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return "LEAF"


@dataclass(frozen=True)
class TestNode:
    ids: frozenset[int]
    neg: "PolicyTree"
    pos: "PolicyTree"


PolicyTree = Union[Leaf, TestNode]

LEAF = Leaf()


def serialize_policy(policy: PolicyTree) -> str:
    """Canonical text form; shared subtrees are expanded in place."""
    out: list[str] = []
    stack: list[object] = [policy]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif isinstance(item, Leaf):
            out.append("LEAF")
        elif isinstance(item, TestNode):
            ids = ",".join(str(i) for i in sorted(item.ids))
            out.append(f"(TEST {ids} NEG=")
            stack.extend((")", item.pos, " POS=", item.neg))
        else:
            raise PolicyError(f"not a policy node: {item!r}")
    return "".join(out)


def parse_policy(text: str) -> PolicyTree:
    """Inverse of :func:`serialize_policy`; rejects anything non-canonical."""
    node, end = _parse_node(text, 0)
    if end != len(text):
        raise PolicyError(f"trailing characters after policy at offset {end}")
    return node


def _parse_node(text: str, at: int) -> tuple[PolicyTree, int]:
    if text.startswith("LEAF", at):
        return LEAF, at + 4
    if not text.startswith("(TEST ", at):
        raise PolicyError(f"expected LEAF or (TEST at offset {at}")
    at += len("(TEST ")
    end_ids = text.find(" NEG=", at)
    if end_ids < 0:
        raise PolicyError("missing NEG= branch")
    try:
        id_list = [int(tok) for tok in text[at:end_ids].split(",")]
    except ValueError:
        raise PolicyError(f"bad id list {text[at:end_ids]!r}") from None
    if not id_list or any(b <= a for a, b in zip(id_list, id_list[1:])):
        raise PolicyError(f"id list must be strictly ascending, got {text[at:end_ids]!r}")
    ids = frozenset(id_list)
    neg, at = _parse_node(text, end_ids + len(" NEG="))
    if not text.startswith(" POS=", at):
        raise PolicyError(f"expected POS= at offset {at}")
    pos, at = _parse_node(text, at + len(" POS="))
    if not text.startswith(")", at):
        raise PolicyError(f"expected ) at offset {at}")
    return TestNode(ids, neg, pos), at + 1


def policy_expected_cost(policy: PolicyTree, pop: Population) -> Number:
    """Exact expected number of tests to classify every unit of ``pop``.

    Walks every branch, weighting by the conditional probability of each
    outcome, so a successful evaluation is also a full structural
    validation of the policy against the population.
    """
    q_of = {u.uid: u.q for u in pop.units}
    memo: dict[tuple[int, frozenset[int], frozenset[int]], Number] = {}

    def q_prod(ids: frozenset[int]) -> Number:
        return math.prod(q_of[i] for i in ids)

    def value(node: PolicyTree, pool: frozenset[int], cont: frozenset[int]) -> Number:
        if len(cont) == 1:
            cont = frozenset()  # lone contaminated unit: defective by deduction
        key = (id(node), pool, cont)
        if key in memo:
            return memo[key]
        if isinstance(node, Leaf):
            if pool or cont:
                raise PolicyError(f"LEAF reached with unclassified units {sorted(pool | cont)}")
            return 0
        if not isinstance(node, TestNode):
            raise PolicyError(f"not a policy node: {node!r}")
        tested = node.ids
        unknown = tested - pool - cont
        if unknown:
            raise PolicyError(f"tests unavailable units {sorted(unknown)}")
        if cont:
            if not tested < cont:
                raise PolicyError(
                    f"must test a proper subset of the contaminated set {sorted(cont)}, "
                    f"got {sorted(tested)}"
                )
            rest = cont - tested
            q_t, q_rest = q_prod(tested), q_prod(rest)
            denom = 1 - q_t * q_rest
            p_neg = q_t * (1 - q_rest) / denom
            p_pos = (1 - q_t) / denom
            result = 1 + p_neg * value(node.neg, pool, rest) + p_pos * value(
                node.pos, pool | rest, tested
            )
        else:
            if not tested <= pool:
                raise PolicyError(f"tests already classified units {sorted(tested - pool)}")
            q_t = q_prod(tested)
            result = 1 + q_t * value(node.neg, pool - tested, frozenset()) + (
                1 - q_t
            ) * value(node.pos, pool - tested, tested)
        memo[key] = result
        return result

    return value(policy, frozenset(q_of), frozenset())


def validate_policy(policy: PolicyTree, pop: Population) -> None:
    """Raise PolicyError unless the policy legally classifies all of ``pop``."""
    policy_expected_cost(policy, pop)


def max_test_size(policy: PolicyTree) -> int:
    """Largest tested-subset size anywhere in the policy (0 for LEAF)."""
    largest = 0
    seen: set[int] = set()
    stack: list[PolicyTree] = [policy]
    while stack:
        node = stack.pop()
        if isinstance(node, TestNode) and id(node) not in seen:
            seen.add(id(node))
            largest = max(largest, len(node.ids))
            stack.extend((node.neg, node.pos))
    return largest
