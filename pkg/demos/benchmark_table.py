"""Walk the four-unit benchmark: every ordering of q = (0.62, 0.62, 0.65, 0.68).

Prints the pairwise-walk cost next to the fixed-order DP cost for all 12
distinct orderings and spells out what the table shows.
"""

from grouptest import Population, fixed_order_optimal, max_test_size
from grouptest.cli import BENCHMARK_ORDERS, benchmark_rows


def main() -> None:
    rows = benchmark_rows()

    print("q order                  pairwise walk   fixed-order DP")
    for order, walk, dp in rows:
        label = " ".join(f"{q:.2f}" for q in order)
        print(f"{label:<23}{walk:>14.4f}{dp:>17.4f}")

    walk = [r[1] for r in rows]
    dp = [r[2] for r in rows]
    print()
    print(f"descending-q row: walk {walk[0]:.4f} == dp {dp[0]:.4f}"
          f" (gap {abs(walk[0] - dp[0]):.1e})")
    print(f"column minima: walk {min(walk):.4f} at row {walk.index(min(walk)) + 1},"
          f" dp {min(dp):.4f} at row {dp.index(min(dp)) + 1}"
          " -- sorting by q is not the best ordering for either engine")

    sizes = {
        max_test_size(fixed_order_optimal(Population.from_q(order)).policy)
        for order in BENCHMARK_ORDERS
    }
    print(f"largest group any optimal fixed-order policy tests: {max(sizes)}")

    row11 = 10
    print(f"row 11 ({' '.join(f'{q:.2f}' for q in rows[row11][0])}):"
          f" dp {dp[row11]:.4f} beats walk {walk[row11]:.4f},"
          " so the walk is not optimal for arbitrary orderings")


if __name__ == "__main__":
    main()
