"""Randomized campaigns that hunt for counterexamples to two claims.

Claim 1: on a descending-q order with every p inside the pairwise
range, the pairwise walk is already the optimal fixed-order nested
strategy (its cost equals the fixed-order DP optimum).

Claim 2: the best pairwise order matches the optimal adaptive nested
strategy outright.

Each instance draws p values uniformly from a configured range, runs the
relevant engines, and records the absolute cost gap.  A gap above
tolerance is a counterexample: it is recorded, reported, and written out
as a standalone population file, never raised as an error, because a
genuine counterexample is this harness's most valuable possible output.

Determinism: the generator for trial t at size n derives from
(seed, n, t) by the documented SplitMix64 mixing, so scheduling and
thread count cannot change any report byte.  Reports carry no
timestamps for the same reason.

Near misses in FLOAT mode (gap inside [1e-12, 1e-6]) are re-checked in
EXACT mode: the sampled doubles convert losslessly to rationals and the
engines re-run with exact arithmetic, whose gap is the final verdict.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

from .gpta import gpta_cost
from .model import (
    Mode,
    Number,
    Population,
    R_RANGE_HI,
    R_RANGE_LO,
    TOLERANCE,
    Unit,
    ValidationError,
    sort_by_q_descending,
)
from .nested_dp import fixed_order_optimal
from .oracle import best_gpta_order, optimal_nested
from .rng import SplitMix64, derive_stream

NEAR_MISS_LO = 1e-12
NEAR_MISS_HI = 1e-6

# Exact re-checks rerun the engines on float-derived rationals, whose
# denominators grow with n; past this size the re-check is skipped and
# the float tolerance stands.
RECHECK_MAX_UNITS = 12

MAX_C2_UNITS = 8


@dataclass(frozen=True)
class CampaignConfig:
    conjecture: int  # 1 or 2
    n_values: tuple[int, ...]
    trials_per_n: int
    p_range: tuple[float, float] = (R_RANGE_LO, R_RANGE_HI)
    seed: int = 0
    tolerance: float = TOLERANCE
    mode: Mode = Mode.FLOAT

    def __post_init__(self) -> None:
        if self.conjecture not in (1, 2):
            raise ValidationError(f"conjecture must be 1 or 2, got {self.conjecture}")
        if not self.n_values or any(n < 1 for n in self.n_values):
            raise ValidationError("n_values must be a nonempty list of sizes >= 1")
        if self.conjecture == 2 and max(self.n_values) > MAX_C2_UNITS:
            raise ValidationError(
                f"conjecture 2 needs every n <= {MAX_C2_UNITS}, got {max(self.n_values)}"
            )
        if self.trials_per_n < 1:
            raise ValidationError("trials_per_n must be >= 1")
        lo, hi = self.p_range
        if not (0 < lo <= hi < 1):
            raise ValidationError(f"p_range must satisfy 0 < lo <= hi < 1, got {self.p_range}")
        if self.tolerance <= 0:
            raise ValidationError("tolerance must be positive")


@dataclass(frozen=True)
class InstanceRecord:
    conjecture: int
    n: int
    trial: int
    q_values: tuple[Number, ...]
    gpta_sorted_cost: Number
    dp_sorted_cost: Number
    gap: Number
    passed: bool
    oracle_cost: Optional[Number] = None
    best_gpta_cost: Optional[Number] = None
    optimal_first_moves: Optional[int] = None
    exact_recheck: Optional[bool] = None


def _scalar(value):
    if isinstance(value, Fraction):
        return str(value)
    return value


_CSV_FIELDS = (
    "conjecture",
    "n",
    "trial",
    "q_values",
    "gpta_sorted_cost",
    "dp_sorted_cost",
    "oracle_cost",
    "best_gpta_cost",
    "optimal_first_moves",
    "gap",
    "passed",
    "exact_recheck",
)


@dataclass(frozen=True)
class CampaignReport:
    config: CampaignConfig
    records: tuple[InstanceRecord, ...]

    @property
    def counterexamples(self) -> tuple[InstanceRecord, ...]:
        return tuple(r for r in self.records if not r.passed)

    @property
    def max_gap(self) -> float:
        return max((float(r.gap) for r in self.records), default=0.0)

    def summary(self) -> dict:
        return {
            "instances": len(self.records),
            "counterexamples": len(self.counterexamples),
            "max_gap": self.max_gap,
        }

    def _record_dict(self, r: InstanceRecord) -> dict:
        return {
            "conjecture": r.conjecture,
            "n": r.n,
            "trial": r.trial,
            "q_values": [_scalar(q) for q in r.q_values],
            "gpta_sorted_cost": _scalar(r.gpta_sorted_cost),
            "dp_sorted_cost": _scalar(r.dp_sorted_cost),
            "oracle_cost": _scalar(r.oracle_cost),
            "best_gpta_cost": _scalar(r.best_gpta_cost),
            "optimal_first_moves": r.optimal_first_moves,
            "gap": _scalar(r.gap),
            "passed": r.passed,
            "exact_recheck": r.exact_recheck,
        }

    def to_json(self) -> str:
        payload = {
            "config": {
                "conjecture": self.config.conjecture,
                "n_values": list(self.config.n_values),
                "trials_per_n": self.config.trials_per_n,
                "p_range": list(self.config.p_range),
                "seed": self.config.seed,
                "tolerance": self.config.tolerance,
                "mode": self.config.mode.value,
            },
            "summary": self.summary(),
            "records": [self._record_dict(r) for r in self.records],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(_CSV_FIELDS)
        for r in self.records:
            row = self._record_dict(r)
            row["q_values"] = ";".join(str(_scalar(q)) for q in r.q_values)
            writer.writerow(["" if row[f] is None else row[f] for f in _CSV_FIELDS])
        return out.getvalue()

    def _counterexample_file(self, r: InstanceRecord) -> str:
        lines = [
            f"# conjecture {r.conjecture} counterexample: n={r.n} trial={r.trial} "
            f"seed={self.config.seed}",
            f"# gpta_sorted_cost={_scalar(r.gpta_sorted_cost)}",
            f"# dp_sorted_cost={_scalar(r.dp_sorted_cost)}",
        ]
        if r.oracle_cost is not None:
            lines.append(f"# oracle_cost={_scalar(r.oracle_cost)}")
        if r.best_gpta_cost is not None:
            lines.append(f"# best_gpta_cost={_scalar(r.best_gpta_cost)}")
        lines.append(f"# gap={_scalar(r.gap)}")
        lines.append("# q values, one per line; re-evaluate with:")
        lines.append("#   grouptest eval dp --file <this file> --kind q")
        lines.extend(str(_scalar(q)) for q in r.q_values)
        return "\n".join(lines) + "\n"

    def write(self, out_dir) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = []
        json_path = out / "report.json"
        json_path.write_text(self.to_json(), encoding="utf-8")
        paths.append(json_path)
        csv_path = out / "report.csv"
        csv_path.write_text(self.to_csv(), encoding="utf-8")
        paths.append(csv_path)
        failures = self.counterexamples
        if failures:
            ce_dir = out / "counterexamples"
            ce_dir.mkdir(exist_ok=True)
            for r in failures:
                path = ce_dir / f"c{r.conjecture}_n{r.n}_t{r.trial}.txt"
                path.write_text(self._counterexample_file(r), encoding="utf-8")
                paths.append(path)
        return paths


def sample_population(n: int, p_range: tuple[float, float], rng_stream: SplitMix64) -> Population:
    """n units with p drawn uniformly from [lo, hi), ids 1..n."""
    lo, hi = p_range
    if not (0 < lo <= hi < 1):
        raise ValidationError(f"p_range must satisfy 0 < lo <= hi < 1, got {p_range}")
    if n < 1:
        raise ValidationError(f"population size must be >= 1, got {n}")
    return Population.from_p(lo + (hi - lo) * rng_stream.uniform() for _ in range(n))


def _to_exact(pop: Population) -> Population:
    # Fraction(float) is the exact binary value, so nothing is lost here.
    return Population(tuple(Unit(u.uid, Fraction(u.p)) for u in pop.units))


def _judge(
    pop: Population,
    gap: Number,
    tolerance: float,
    mode: Mode,
    exact_gap_of: Callable[[Population], Number],
) -> tuple[bool, Optional[bool]]:
    """(passed, exact_recheck) for one measured gap."""
    if mode is Mode.EXACT:
        return gap <= tolerance, None
    if gap < NEAR_MISS_LO:
        return True, None
    if gap <= NEAR_MISS_HI and pop.n <= RECHECK_MAX_UNITS:
        exact_gap = exact_gap_of(_to_exact(pop))
        return exact_gap <= tolerance, exact_gap == 0
    return gap <= tolerance, None


def _c1_gap(pop: Population) -> Number:
    ordered = sort_by_q_descending(pop)
    return abs(
        fixed_order_optimal(ordered, build_policy=False).cost - gpta_cost(ordered)
    )


def _c2_gap(pop: Population) -> Number:
    return abs(optimal_nested(pop).cost - best_gpta_order(pop).cost)


def check_instance(
    conjecture: int,
    pop: Population,
    tolerance: float = TOLERANCE,
    trial: int = 0,
) -> InstanceRecord:
    """Measure one population against claim 1 or 2.

    This is the single-instance core of both campaigns; it also
    re-verifies populations read back from counterexample files.
    """
    if conjecture not in (1, 2):
        raise ValidationError(f"conjecture must be 1 or 2, got {conjecture}")
    mode = pop.mode
    ordered = sort_by_q_descending(pop)
    gpta_sorted = gpta_cost(ordered)
    dp_sorted = fixed_order_optimal(ordered, build_policy=False).cost
    oracle_cost = None
    best_cost = None
    first_moves = None
    if conjecture == 1:
        gap = abs(dp_sorted - gpta_sorted)
        passed, recheck = _judge(pop, gap, tolerance, mode, _c1_gap)
    else:
        oracle = optimal_nested(pop)
        best = best_gpta_order(pop)
        oracle_cost, best_cost, first_moves = (
            oracle.cost,
            best.cost,
            oracle.optimal_first_moves,
        )
        gap = abs(oracle_cost - best_cost)
        passed, recheck = _judge(pop, gap, tolerance, mode, _c2_gap)
    return InstanceRecord(
        conjecture=conjecture,
        n=pop.n,
        trial=trial,
        q_values=pop.q_values,
        gpta_sorted_cost=gpta_sorted,
        dp_sorted_cost=dp_sorted,
        gap=gap,
        passed=passed,
        oracle_cost=oracle_cost,
        best_gpta_cost=best_cost,
        optimal_first_moves=first_moves,
        exact_recheck=recheck,
    )


def _run(config: CampaignConfig, threads: int) -> CampaignReport:
    def worker(task: tuple[int, int]) -> InstanceRecord:
        n, trial = task
        pop = sample_population(n, config.p_range, derive_stream(config.seed, n, trial))
        if config.mode is Mode.EXACT:
            pop = _to_exact(pop)
        return check_instance(config.conjecture, pop, config.tolerance, trial)

    tasks = [(n, t) for n in config.n_values for t in range(config.trials_per_n)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = tuple(pool.map(worker, tasks))
    else:
        records = tuple(worker(task) for task in tasks)
    return CampaignReport(config=config, records=records)


def run_conjecture1(config: CampaignConfig, threads: int = 1) -> CampaignReport:
    """Sorted-order pairwise walk vs fixed-order DP, per config."""
    if config.conjecture != 1:
        raise ValidationError("config.conjecture must be 1")
    return _run(config, threads)


def run_conjecture2(config: CampaignConfig, threads: int = 1) -> CampaignReport:
    """Adaptive oracle vs best pairwise order, per config."""
    if config.conjecture != 2:
        raise ValidationError("config.conjecture must be 2")
    return _run(config, threads)


def run_campaign(config: CampaignConfig, threads: int = 1) -> CampaignReport:
    if config.conjecture == 1:
        return run_conjecture1(config, threads)
    return run_conjecture2(config, threads)
