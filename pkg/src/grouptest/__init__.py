"""Group testing with independent, non-identical units.

Engines:
  - gpta: the pairwise walk over a fixed order (cost, policy,
    execution traces, enumeration and Monte Carlo cross-checks)
  - nested_dp: optimal fixed-order nested strategy via cubic DP
  - oracle: exact optimum over all adaptive nested strategies, plus
    searches over unit orders
  - dorfman: two-stage pooling baseline

The harness module runs randomized campaigns comparing the engines; the
cli module exposes everything as the `grouptest` command.
"""

from .dorfman import (
    PartitionResult,
    brute_force_partitions,
    dorfman_group_cost,
    optimal_ordered_partition,
    partition_to_json,
)
from .gpta import (
    ExecutionResult,
    MonteCarloResult,
    PairComparison,
    gpta_cost,
    gpta_execute,
    gpta_expected_by_enumeration,
    gpta_monte_carlo,
    gpta_policy,
    pair_resolution_comparison,
)
from .harness import (
    CampaignConfig,
    CampaignReport,
    InstanceRecord,
    check_instance,
    run_campaign,
    run_conjecture1,
    run_conjecture2,
    sample_population,
)
from .model import (
    GOLDEN_RATIO_Q,
    GroupTestError,
    Mode,
    Number,
    Population,
    R_RANGE_HI,
    R_RANGE_LO,
    SizeLimitError,
    TOLERANCE,
    Unit,
    ValidationError,
    ValueKind,
    parse_population,
    q_product,
    r_range_contains,
    sort_by_q_descending,
)
from .nested_dp import (
    FixedOrderResult,
    brute_force_order_respecting,
    fixed_order_optimal,
    individual_testing_sufficient,
)
from .oracle import (
    BestFixedOrderResult,
    BestOrderResult,
    OracleResult,
    TwoUnitResult,
    TwoUnitStrategy,
    best_fixed_order,
    best_gpta_order,
    optimal_nested,
    two_unit_optimal,
)
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

__version__ = "0.1.0"

__all__ = [
    "BestFixedOrderResult",
    "BestOrderResult",
    "CampaignConfig",
    "CampaignReport",
    "ExecutionResult",
    "FixedOrderResult",
    "GOLDEN_RATIO_Q",
    "GroupTestError",
    "InstanceRecord",
    "LEAF",
    "Leaf",
    "Mode",
    "MonteCarloResult",
    "Number",
    "OracleResult",
    "PairComparison",
    "PartitionResult",
    "PolicyError",
    "PolicyTree",
    "Population",
    "R_RANGE_HI",
    "R_RANGE_LO",
    "SizeLimitError",
    "TOLERANCE",
    "TestNode",
    "TwoUnitResult",
    "TwoUnitStrategy",
    "Unit",
    "ValidationError",
    "ValueKind",
    "best_fixed_order",
    "best_gpta_order",
    "brute_force_order_respecting",
    "brute_force_partitions",
    "check_instance",
    "dorfman_group_cost",
    "fixed_order_optimal",
    "gpta_cost",
    "gpta_execute",
    "gpta_expected_by_enumeration",
    "gpta_monte_carlo",
    "gpta_policy",
    "individual_testing_sufficient",
    "max_test_size",
    "optimal_nested",
    "optimal_ordered_partition",
    "pair_resolution_comparison",
    "parse_policy",
    "parse_population",
    "partition_to_json",
    "policy_expected_cost",
    "q_product",
    "r_range_contains",
    "run_campaign",
    "run_conjecture1",
    "run_conjecture2",
    "sample_population",
    "serialize_policy",
    "sort_by_q_descending",
    "two_unit_optimal",
    "validate_policy",
]
