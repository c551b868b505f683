"""Experiment orchestration: run the configured policies over identical
streams, log one CSV row per (run, round, algorithm), and summarize.

Every policy consumes the same per-run stream.  Randomized policies draw
their realized buy day from an algorithm-specific child generator, so adding
or removing one policy never perturbs another's rows.  The CSV ratio column
holds the realized draw for randomized policies (the chart is an empirical
curve); learner regret accounting uses expected ratios internally.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

from ..core import Pip
from ..ski_rental import (
    PurchaseDistribution,
    dsr_pip_buy_day,
    ftp_buy_day,
    solve_rsr,
    woa_distribution,
)
from ..online_learning import (
    DynamicSkiLearner,
    StaticSkiLearner,
    ol_dynamic_ski_round,
    ol_static_round,
)
from .config import ConfigError, ExperimentConfig
from .rng import SplitMix64
from .streams import SkiRound, generate_ski_stream

__all__ = ["ExperimentRecord", "RunArtifacts", "RsrCache", "run_experiment",
           "SUMMARY_CHECKPOINTS", "RECORD_COLUMNS"]

RECORD_COLUMNS = ("run", "t", "algorithm", "ell", "u", "delta", "true_value",
                  "ratio", "cumulative_excess")
SUMMARY_CHECKPOINTS = (100, 500, 1000, 3000)


@dataclass(frozen=True)
class ExperimentRecord:
    run: int
    t: int
    algorithm: str
    ell: int
    u: int
    delta: float
    true_value: int
    ratio: float
    cumulative_excess: float

    def csv_row(self) -> str:
        return ",".join((
            str(self.run), str(self.t), self.algorithm, str(self.ell),
            str(self.u), repr(self.delta), str(self.true_value),
            repr(self.ratio), repr(self.cumulative_excess),
        ))


class RsrCache:
    """Memoized robust-policy solves keyed on the prediction triple."""

    def __init__(self, buy_cost: int, enabled: bool = True) -> None:
        self.buy_cost = buy_cost
        self.enabled = enabled
        self.solve_count = 0
        self._cache: dict[tuple[int, int, float], object] = {}

    def solution(self, pip: Pip):
        key = (int(pip.lower), int(pip.upper), pip.delta)
        if self.enabled and key in self._cache:
            return self._cache[key]
        sol = solve_rsr(pip, self.buy_cost)
        self.solve_count += 1
        if self.enabled:
            self._cache[key] = sol
        return sol


def _cost_ratio(buy_day: float, horizon: int, buy_cost: int) -> float:
    """Realized cost ratio of a (possibly never-buy) day on one instance."""
    opt = min(horizon, buy_cost)
    if buy_day <= horizon:
        return (buy_cost + buy_day - 1) / opt
    return horizon / opt


def _sample_ratio(policy: PurchaseDistribution, rnd: SkiRound,
                  rng: SplitMix64, buy_cost: int) -> float:
    day = policy.sample_day(rng.uniform())
    return _cost_ratio(day, rnd.instance.horizon, buy_cost)


class _Woa:
    def __init__(self, config: ExperimentConfig, rng: SplitMix64) -> None:
        self.policy = woa_distribution(config.B)
        self.B = config.B
        self.rng = rng

    def play(self, rnd: SkiRound) -> float:
        return _sample_ratio(self.policy, rnd, self.rng, self.B)


class _Ftp:
    def __init__(self, config: ExperimentConfig, rng: SplitMix64) -> None:
        self.B = config.B
        self.literal = config.ftp_literal

    def play(self, rnd: SkiRound) -> float:
        day = ftp_buy_day(rnd.point_prediction, self.B, literal=self.literal)
        return _cost_ratio(day, rnd.instance.horizon, self.B)


class _RsrPip:
    def __init__(self, config: ExperimentConfig, rng: SplitMix64, cache: RsrCache) -> None:
        self.cache = cache
        self.B = config.B
        self.rng = rng

    def play(self, rnd: SkiRound) -> float:
        sol = self.cache.solution(rnd.pip)
        return _sample_ratio(sol.policy, rnd, self.rng, self.B)


class _DsrPip:
    def __init__(self, config: ExperimentConfig, rng: SplitMix64) -> None:
        self.B = config.B

    def play(self, rnd: SkiRound) -> float:
        y = dsr_pip_buy_day(rnd.pip, self.B)
        day = max(1, math.ceil(y))  # continuous rule enters the discrete sim
        return _cost_ratio(day, rnd.instance.horizon, self.B)


class _OlDynamic:
    def __init__(self, config: ExperimentConfig, rng: SplitMix64) -> None:
        self.state = DynamicSkiLearner(
            n_max=config.horizon_max, buy_cost=config.B, horizon=config.T
        )
        self.rng = rng
        self.logs = []

    def play(self, rnd: SkiRound) -> float:
        _, log = ol_dynamic_ski_round(
            self.state, rnd.pip, rnd.instance, rng_uniform=self.rng.uniform
        )
        self.logs.append(log)
        return log.ratio_sampled


class _OlStatic:
    def __init__(self, config: ExperimentConfig, rng: SplitMix64) -> None:
        self.state = StaticSkiLearner(
            n_max=config.horizon_max, buy_cost=config.B, horizon=config.T
        )
        self.rng = rng

    def play(self, rnd: SkiRound) -> float:
        _, log = ol_static_round(
            self.state, rnd.instance, rng_uniform=self.rng.uniform, pip=None
        )
        return log.ratio_sampled


_POLICY_BUILDERS = {
    "WOA": _Woa,
    "FTP": _Ftp,
    "DSR-PIP": _DsrPip,
    "OL-Dynamic": _OlDynamic,
    "OL-Static": _OlStatic,
}


@dataclass
class RunArtifacts:
    records_path: str
    summary_path: str
    rsr_solve_count: int
    final_excess: dict[str, float]  # per-algorithm mean cumulative excess at T
    summary: list[tuple[str, int, float]] = field(default_factory=list)


def run_experiment(config: ExperimentConfig, out_dir: str,
                   memoize: bool = True) -> RunArtifacts:
    """Run every configured algorithm over `runs` seeded streams.

    Writes records.csv (one row per run/round/algorithm) and summary.csv
    (per-algorithm mean cumulative excess at the checkpoints).  Partial
    output files are removed if the run aborts.
    """
    config = config.validate()
    if config.problem != "ski-rental":
        raise ConfigError(
            "the experiment runner reproduces the multi-instance ski-rental "
            "setup; online-search policies are exercised through solve-search "
            "and oracle-check"
        )
    os.makedirs(out_dir, exist_ok=True)
    records_path = os.path.join(out_dir, "records.csv")
    summary_path = os.path.join(out_dir, "summary.csv")

    cache = RsrCache(config.B, enabled=memoize)
    # per (algorithm, t) running totals of cumulative excess across runs
    totals: dict[str, list[float]] = {a: [0.0] * config.T for a in config.algorithms}

    try:
        with open(records_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(RECORD_COLUMNS) + "\n")
            for run in range(config.runs):
                run_seed = config.seed + run
                stream = generate_ski_stream(config, run_seed)
                base = SplitMix64(run_seed)
                policies = {}
                for name in config.algorithms:
                    rng = base.derive(f"alg::{name}")
                    if name == "RSR-PIP":
                        policies[name] = _RsrPip(config, rng, cache)
                    else:
                        policies[name] = _POLICY_BUILDERS[name](config, rng)
                ratio_sums = {name: 0.0 for name in config.algorithms}
                for rnd in stream:
                    for name in config.algorithms:
                        ratio = policies[name].play(rnd)
                        ratio_sums[name] += ratio
                        excess = ratio_sums[name] / rnd.t - 1.0
                        totals[name][rnd.t - 1] += excess
                        rec = ExperimentRecord(
                            run=run,
                            t=rnd.t,
                            algorithm=name,
                            ell=int(rnd.pip.lower),
                            u=int(rnd.pip.upper),
                            delta=rnd.pip.delta,
                            true_value=rnd.instance.horizon,
                            ratio=ratio,
                            cumulative_excess=excess,
                        )
                        fh.write(rec.csv_row() + "\n")

        checkpoints = [t for t in SUMMARY_CHECKPOINTS if t <= config.T]
        if config.T not in checkpoints:
            checkpoints.append(config.T)
        summary_rows: list[tuple[str, int, float]] = []
        with open(summary_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("algorithm,t,mean_cumulative_excess\n")
            for name in config.algorithms:
                for t in checkpoints:
                    mean = totals[name][t - 1] / config.runs
                    summary_rows.append((name, t, mean))
                    fh.write(f"{name},{t},{mean!r}\n")
    except BaseException:
        for path in (records_path, summary_path):
            if os.path.exists(path):
                os.unlink(path)
        raise

    final = {name: totals[name][config.T - 1] / config.runs
             for name in config.algorithms}
    return RunArtifacts(
        records_path=records_path,
        summary_path=summary_path,
        rsr_solve_count=cache.solve_count,
        final_excess=final,
        summary=summary_rows,
    )
