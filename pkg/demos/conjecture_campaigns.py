"""Run both verification campaigns in miniature and show what a failure
looks like when the defect-probability range leaves the regime where the
equalities hold.
"""

from grouptest import (
    CampaignConfig,
    R_RANGE_HI,
    R_RANGE_LO,
    run_campaign,
)


def describe(title: str, cfg: CampaignConfig) -> None:
    report = run_campaign(cfg)
    print(title)
    print(f"  instances {len(report.records)}, counterexamples"
          f" {len(report.counterexamples)}, max gap {report.max_gap:.3e}")
    for rec in report.counterexamples[:3]:
        qs = " ".join(f"{float(q):.4f}" for q in rec.q_values)
        print(f"  n={rec.n} trial={rec.trial} gap={float(rec.gap):.3e}  q: {qs}")
    print()


if __name__ == "__main__":
    in_range = (R_RANGE_LO, R_RANGE_HI)

    describe(
        "sorted-order pairwise walk vs fixed-order DP, p in the pair-first regime",
        CampaignConfig(conjecture=1, n_values=tuple(range(2, 31)), trials_per_n=5,
                       p_range=in_range, seed=0),
    )

    describe(
        "adaptive optimum vs best pairwise ordering, n = 2..6",
        CampaignConfig(conjecture=2, n_values=(2, 3, 4, 5, 6), trials_per_n=10,
                       p_range=in_range, seed=0),
    )

    # outside the regime the first equality breaks almost immediately
    describe(
        "same walk-vs-DP check with p in (0.02, 0.10): expect counterexamples",
        CampaignConfig(conjecture=1, n_values=tuple(range(2, 11)), trials_per_n=5,
                       p_range=(0.02, 0.10), seed=0),
    )
