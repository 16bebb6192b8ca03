"""Print complete testing policies for one population, engine by engine.

Uses q = (0.68, 0.65, 0.62, 0.62) sorted descending and shows the pairwise
walk trace, the fixed-order DP tree, the unrestricted adaptive optimum, and
the Dorfman-style ordered partition.
"""

from grouptest import (
    Population,
    fixed_order_optimal,
    gpta_execute,
    optimal_nested,
    optimal_ordered_partition,
    policy_expected_cost,
    serialize_policy,
)

Q = (0.68, 0.65, 0.62, 0.62)


def show(title: str, cost, policy) -> None:
    print(f"{title}: expected tests {float(cost):.7f}")
    print(f"  tree: {serialize_policy(policy)}")
    print(f"  re-evaluated from the tree: {float(policy_expected_cost(policy, POP)):.7f}")
    print()


POP = Population.from_q(Q)

if __name__ == "__main__":
    dp = fixed_order_optimal(POP)
    show("fixed-order DP", dp.cost, dp.policy)

    oracle = optimal_nested(POP)
    show("adaptive optimum", oracle.cost, oracle.policy)
    print(f"  optimal opening tests: {oracle.optimal_first_moves}")
    print()

    part = optimal_ordered_partition(POP)
    groups = " ".join(f"{i}-{j}" for i, j in part.partition)
    print(f"ordered partition (one pooled test per group, then retest all on"
          f" a positive): groups {groups}, expected tests {part.cost:.4f}")
    print("  defects this common make pooling useless; with rare defects the")
    rare = Population.from_p([0.01, 0.02, 0.05, 0.08])
    rpart = optimal_ordered_partition(rare)
    rgroups = " ".join(f"{i}-{j}" for i, j in rpart.partition)
    print(f"  same engine pools: p = 0.01 0.02 0.05 0.08 ->"
          f" groups {rgroups}, expected tests {rpart.cost:.4f}")
    print()

    # one concrete walk: unit 3 defective, rest good
    vector = (False, False, True, False)
    run = gpta_execute(POP, vector)
    print(f"pairwise walk with only unit 3 defective, {run.tests_used} tests:")
    for step in run.trace:
        print(f"  {step}")
