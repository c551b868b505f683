"""Learning to exploit interval predictions across an instance stream.

An epsilon-net over the prediction space assigns an independent
exponentiated-gradient expert learner to each ball, so each learner only
ever sees similar predictions.  Ski rental keys the nets by the discrete
interval ends and covers the confidence coordinate; online search first
rounds the interval onto an even grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .core import DomainError, Pip, SearchInstance, SkiInstance
from .online_search import ProtectionFunction, PriceGrid, solve_pfa
from .ski_rental import PurchaseDistribution, solve_rsr

__all__ = [
    "EgLearner",
    "eg_init",
    "eg_init_anytime",
    "eg_decide",
    "eg_update",
    "EpsilonNet",
    "net_lookup_or_insert",
    "RoundLog",
    "DynamicSkiLearner",
    "StaticSkiLearner",
    "DynamicSearchLearner",
    "ol_dynamic_ski_round",
    "ol_static_round",
    "ol_dynamic_search_round",
    "policy_regret",
    "ski_loss_vector",
]


# ---------------------------------------------------------------------------
# Exponentiated gradient over the simplex
# ---------------------------------------------------------------------------

@dataclass
class EgLearner:
    """Multiplicative-weights learner.  Weights are kept in log space and
    renormalized on every update so they stay strictly positive and finite.

    step_size is the fixed horizon-tuned step sqrt(ln n_ctx) /
    (loss_bound * sqrt(2 T)).  step_size=None selects the self-confident
    anytime schedule needed when a learner's horizon is unknown up front
    (each net ball sees an unknown share of the stream): the a-priori
    T * loss_bound^2 in the tuned step is replaced by the running sum of
    observed squared loss ranges, sqrt(ln n_ctx) / sqrt(bound^2 + sum r^2),
    which recovers the tuned step against full-range loss sequences and
    keeps the same order of regret.
    """

    log_weights: np.ndarray
    loss_bound: float
    n_ctx: int
    step_size: Optional[float]
    rounds_seen: int = 0
    clip_count: int = 0
    range_sq_sum: float = 0.0

    @property
    def n_experts(self) -> int:
        return self.log_weights.size

    def probabilities(self) -> np.ndarray:
        shifted = self.log_weights - self.log_weights.max()
        w = np.exp(shifted)
        return w / w.sum()

    def current_step(self) -> float:
        if self.step_size is not None:
            return self.step_size
        denom = math.sqrt(self.loss_bound**2 + self.range_sq_sum)
        return math.sqrt(math.log(self.n_ctx)) / denom

    def update(self, losses: Sequence[float]) -> None:
        loss = np.asarray(losses, dtype=float)
        if loss.shape != (self.n_experts,):
            raise DomainError(
                f"loss vector must have length {self.n_experts}, got {loss.shape}"
            )
        clipped = np.clip(loss, 0.0, self.loss_bound)
        self.clip_count += int(np.sum(clipped != loss))
        self.log_weights -= self.current_step() * clipped
        self.log_weights -= self.log_weights.max()
        self.rounds_seen += 1
        spread = float(clipped.max() - clipped.min())
        self.range_sq_sum += spread * spread


def eg_init(n_experts: int, horizon: int, loss_bound: float,
            n_ctx: Optional[int] = None) -> EgLearner:
    """Uniform-weight learner with the horizon-tuned step
    sqrt(ln n_ctx) / (loss_bound * sqrt(2 T))."""
    if n_experts < 1 or horizon < 1:
        raise DomainError("need n_experts >= 1 and horizon >= 1")
    if loss_bound <= 0:
        raise DomainError("loss bound must be positive")
    ctx = n_ctx if n_ctx is not None else n_experts
    step = math.sqrt(math.log(ctx)) / (loss_bound * math.sqrt(2.0 * horizon)) if ctx > 1 else 0.0
    return EgLearner(np.zeros(n_experts), float(loss_bound), ctx, step)


def eg_init_anytime(n_experts: int, loss_bound: float,
                    n_ctx: Optional[int] = None) -> EgLearner:
    """Uniform-weight learner on the decreasing anytime step schedule."""
    if n_experts < 1:
        raise DomainError("need n_experts >= 1")
    ctx = n_ctx if n_ctx is not None else n_experts
    return EgLearner(np.zeros(n_experts), float(loss_bound), ctx, None)


def eg_decide(learner: EgLearner) -> np.ndarray:
    return learner.probabilities()


def eg_update(learner: EgLearner, losses: Sequence[float]) -> None:
    learner.update(losses)


# ---------------------------------------------------------------------------
# Epsilon net over prediction coordinates
# ---------------------------------------------------------------------------

@dataclass
class EpsilonNet:
    """Greedy cover: a new point becomes a center only when it is farther
    than radius from every existing center, so pairwise center distances
    stay strictly above the radius."""

    radius: float
    centers: list[np.ndarray] = field(default_factory=list)
    learners: list[EgLearner] = field(default_factory=list)

    def lookup_or_insert(self, coords: np.ndarray,
                         factory: Callable[[], EgLearner]) -> int:
        coords = np.atleast_1d(np.asarray(coords, dtype=float))
        best, best_dist = -1, math.inf
        for i, c in enumerate(self.centers):
            d = float(np.linalg.norm(coords - c))
            if d < best_dist:
                best, best_dist = i, d
        if best >= 0 and best_dist <= self.radius:
            return best
        self.centers.append(coords)
        self.learners.append(factory())
        return len(self.centers) - 1

    def __len__(self) -> int:
        return len(self.centers)


def net_lookup_or_insert(net: EpsilonNet, theta_coords: Sequence[float],
                         factory: Callable[[], EgLearner]) -> int:
    return net.lookup_or_insert(np.asarray(theta_coords, dtype=float), factory)


# ---------------------------------------------------------------------------
# Round records and regret accounting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RoundLog:
    t: int
    theta: Optional[Pip]
    decision: str
    ratio: float                      # expected ratio under the played mixture
    ratio_sampled: Optional[float]    # one realized draw, when applicable
    benchmark: float                  # robust-optimal ratio at this prediction
    learner_key: Optional[tuple]


def policy_regret(history: Sequence[RoundLog]) -> tuple[list[float], list[float]]:
    """Running sums of (expected ratio - benchmark) and the running-average
    excess ratio (mean of expected ratios, minus one)."""
    regret: list[float] = []
    excess: list[float] = []
    acc = 0.0
    ratio_sum = 0.0
    for i, log in enumerate(history, start=1):
        acc += log.ratio - log.benchmark
        ratio_sum += log.ratio
        regret.append(acc)
        excess.append(ratio_sum / i - 1.0)
    return regret, excess


# ---------------------------------------------------------------------------
# Ski rental
# ---------------------------------------------------------------------------

def ski_loss_vector(instance: SkiInstance, n_max: int) -> np.ndarray:
    """Cost ratio of each candidate buy day 1..n_max on a revealed instance."""
    N, B = instance.horizon, instance.buy_cost
    opt = min(N, B)
    days = np.arange(1, n_max + 1)
    cost = np.where(days <= N, B + days - 1, N)
    return cost / opt


def _pip_ints(pip: Pip, n_max: int) -> tuple[int, int]:
    ell, u = int(round(pip.lower)), int(round(pip.upper))
    if abs(pip.lower - ell) > 1e-9 or abs(pip.upper - u) > 1e-9:
        raise DomainError("ski predictions must be integer-clamped first")
    if not 1 <= ell <= u <= n_max:
        raise DomainError(f"interval [{ell}, {u}] outside [1, {n_max}]")
    return ell, u


@dataclass
class DynamicSkiLearner:
    """Per-(lower, upper) nets over the confidence coordinate, each ball
    owning an expert learner over buy days 1..n_max."""

    n_max: int
    buy_cost: int
    horizon: int
    epsilon: Optional[float] = None
    anytime: bool = True
    nets: dict[tuple[int, int], EpsilonNet] = field(default_factory=dict)
    benchmark_cache: dict[tuple[int, int, float], float] = field(default_factory=dict)
    rounds_played: int = 0

    def __post_init__(self) -> None:
        if self.n_max < 2:
            raise DomainError("need at least two candidate days")
        if self.epsilon is None:
            self.epsilon = self.horizon ** (-1.0 / 3.0)

    @property
    def loss_bound(self) -> float:
        return float(max((self.n_max + self.buy_cost) / self.buy_cost, self.buy_cost))

    def _new_learner(self) -> EgLearner:
        if self.anytime:
            return eg_init_anytime(self.n_max, self.loss_bound, n_ctx=self.n_max)
        return eg_init(self.n_max, self.horizon, self.loss_bound, n_ctx=self.n_max)

    def learner_for(self, pip: Pip) -> tuple[tuple[int, int, int], EgLearner]:
        ell, u = _pip_ints(pip, self.n_max)
        net = self.nets.setdefault((ell, u), EpsilonNet(self.epsilon))
        key = net.lookup_or_insert(np.array([pip.delta]), self._new_learner)
        return (ell, u, key), net.learners[key]

    def benchmark(self, pip: Pip) -> float:
        ell, u = _pip_ints(pip, self.n_max)
        key = (ell, u, pip.delta)
        if key not in self.benchmark_cache:
            self.benchmark_cache[key] = solve_rsr(pip, self.buy_cost).drcr
        return self.benchmark_cache[key]

    def total_centers(self) -> int:
        return sum(len(net) for net in self.nets.values())


def ol_dynamic_ski_round(
    state: DynamicSkiLearner,
    pip: Pip,
    instance: SkiInstance,
    rng_uniform: Optional[Callable[[], float]] = None,
) -> tuple[PurchaseDistribution, RoundLog]:
    """One prediction-aware round: pick the ball's learner, play its mixture
    over buy days, then reveal the instance and update with the full loss
    vector (every day's ratio is computable once the horizon is known)."""
    if instance.buy_cost != state.buy_cost:
        raise DomainError("instance buy cost differs from the learner state")
    if instance.horizon > state.n_max:
        raise DomainError("instance horizon exceeds the configured day bound")
    key, learner = state.learner_for(pip)
    probs = learner.probabilities()
    losses = ski_loss_vector(instance, state.n_max)
    expected = float(probs @ losses)

    sampled = None
    policy = PurchaseDistribution(
        tuple(range(1, state.n_max + 1)), tuple(float(p) for p in probs)
    )
    if rng_uniform is not None:
        day = policy.sample_day(rng_uniform())
        sampled = float(losses[day - 1])

    learner.update(losses)
    state.rounds_played += 1
    log = RoundLog(
        t=state.rounds_played,
        theta=pip,
        decision=f"mixture over days 1..{state.n_max}",
        ratio=expected,
        ratio_sampled=sampled,
        benchmark=state.benchmark(pip),
        learner_key=key,
    )
    return policy, log


@dataclass
class StaticSkiLearner:
    """One learner for the whole stream, predictions ignored."""

    n_max: int
    buy_cost: int
    horizon: int
    anytime: bool = False
    learner: EgLearner = field(init=False)
    rounds_played: int = 0
    benchmark_cache: dict[tuple[int, int, float], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        loss_bound = float(max((self.n_max + self.buy_cost) / self.buy_cost, self.buy_cost))
        if self.anytime:
            self.learner = eg_init_anytime(self.n_max, loss_bound, n_ctx=self.n_max)
        else:
            self.learner = eg_init(self.n_max, self.horizon, loss_bound, n_ctx=self.n_max)

    def benchmark(self, pip: Optional[Pip]) -> float:
        if pip is None:
            return 1.0
        key = (int(pip.lower), int(pip.upper), pip.delta)
        if key not in self.benchmark_cache:
            self.benchmark_cache[key] = solve_rsr(pip, self.buy_cost).drcr
        return self.benchmark_cache[key]


def ol_static_round(
    state: StaticSkiLearner,
    instance: SkiInstance,
    rng_uniform: Optional[Callable[[], float]] = None,
    pip: Optional[Pip] = None,
) -> tuple[PurchaseDistribution, RoundLog]:
    """Prediction-blind round; identical loss plumbing to the dynamic path."""
    if instance.buy_cost != state.buy_cost:
        raise DomainError("instance buy cost differs from the learner state")
    probs = state.learner.probabilities()
    losses = ski_loss_vector(instance, state.n_max)
    expected = float(probs @ losses)
    policy = PurchaseDistribution(
        tuple(range(1, state.n_max + 1)), tuple(float(p) for p in probs)
    )
    sampled = None
    if rng_uniform is not None:
        day = policy.sample_day(rng_uniform())
        sampled = float(losses[day - 1])
    state.learner.update(losses)
    state.rounds_played += 1
    log = RoundLog(
        t=state.rounds_played,
        theta=pip,
        decision=f"mixture over days 1..{state.n_max}",
        ratio=expected,
        ratio_sampled=sampled,
        benchmark=state.benchmark(pip),
        learner_key=None,
    )
    return policy, log


# ---------------------------------------------------------------------------
# Online search
# ---------------------------------------------------------------------------

@dataclass
class DynamicSearchLearner:
    """Experts are threshold schedules (sell everything at the first price
    reaching a grid level); intervals are rounded onto an even grid before
    keying the nets.

    Discretization widths follow the horizon: epsilon =
    min((M/m)^(-2/5), 1) * T^(-1/5), lambda1 = epsilon * min(M/m - 1, 1)
    for the geometric levels and lambda2 = epsilon * (M - m) for the even
    levels and the interval rounding.
    """

    m: float
    M: float
    horizon: int
    benchmark_eps: float = 0.05
    anytime: bool = True
    rounds_played: int = 0
    clip_events: int = 0

    def __post_init__(self) -> None:
        if not 0 < self.m < self.M:
            raise DomainError("need 0 < m < M")
        ratio = self.M / self.m
        self.epsilon = min(ratio ** (-0.4), 1.0) * self.horizon ** (-0.2)
        self.lambda1 = self.epsilon * min(ratio - 1.0, 1.0)
        self.lambda2 = self.epsilon * (self.M - self.m)

        geo: list[float] = []
        k = 0
        while self.m * (1.0 + self.lambda1) ** k <= self.M * (1.0 + 1e-12):
            geo.append(self.m * (1.0 + self.lambda1) ** k)
            k += 1
        self.even = [self.m + i * self.lambda2
                     for i in range(int((self.M - self.m) / self.lambda2) + 1)]
        if self.even[-1] < self.M - 1e-12:
            self.even.append(self.M)
        levels = sorted(set(round(v, 12) for v in geo + self.even))
        self.levels = np.asarray(levels)
        self.grid = PriceGrid(tuple(levels), 0, len(levels) - 1)
        self.nets: dict[tuple[float, float], EpsilonNet] = {}
        self.benchmark_cache: dict[tuple[float, float, float], float] = {}

    @property
    def loss_bound(self) -> float:
        return self.M / self.m

    def _new_learner(self) -> EgLearner:
        n = len(self.levels)
        if self.anytime:
            return eg_init_anytime(n, self.loss_bound, n_ctx=n)
        return eg_init(n, self.horizon, self.loss_bound, n_ctx=n)

    def round_interval(self, pip: Pip) -> tuple[float, float]:
        """Lower end rounded down and upper end rounded up onto the even grid."""
        lo = self.m + math.floor((pip.lower - self.m) / self.lambda2) * self.lambda2
        hi = self.m + math.ceil((pip.upper - self.m) / self.lambda2) * self.lambda2
        return max(self.m, lo), min(self.M, hi)

    def learner_for(self, pip: Pip) -> tuple[tuple[float, float, int], EgLearner]:
        lo, hi = self.round_interval(pip)
        key2 = (round(lo, 12), round(hi, 12))
        net = self.nets.setdefault(key2, EpsilonNet(self.epsilon))
        idx = net.lookup_or_insert(np.array([pip.delta]), self._new_learner)
        return (key2[0], key2[1], idx), net.learners[idx]

    def benchmark(self, pip: Pip) -> float:
        key = (pip.lower, pip.upper, pip.delta)
        if key not in self.benchmark_cache:
            self.benchmark_cache[key] = solve_pfa(
                pip, self.m, self.M, self.benchmark_eps
            ).drcr
        return self.benchmark_cache[key]


def _expert_profits(levels: np.ndarray, instance: SearchInstance) -> np.ndarray:
    """Sale price earned by each threshold expert: the first price reaching
    its level, or the final price under compulsory selling."""
    profits = np.full(levels.size, instance.prices[-1])
    running = -math.inf
    done = 0
    for p in instance.prices[:-1]:
        if p > running:
            while done < levels.size and levels[done] <= p:
                profits[done] = p
                done += 1
            running = p
        if done >= levels.size:
            break
    return profits


def ol_dynamic_search_round(
    state: DynamicSearchLearner, pip: Pip, instance: SearchInstance
) -> tuple[ProtectionFunction, RoundLog]:
    """One round of prediction-aware one-way trading.

    The mixture weight on each threshold expert sells at that expert's
    crossing price, so the executed profit is linear in the weights; the
    update uses the profit-ratio subgradient, magnitude-clipped at M/m and
    shifted into [0, M/m] (multiplicative weights are shift invariant).
    """
    key, learner = state.learner_for(pip)
    probs = learner.probabilities()
    profits = _expert_profits(state.levels, instance)
    alg = float(probs @ profits)
    opt = max(instance.prices)
    ratio = opt / alg

    grad = -opt * profits / (alg * alg)
    bound = state.loss_bound
    clipped = np.maximum(grad, -bound)
    state.clip_events += int(np.sum(clipped != grad))
    learner.update(clipped + bound)

    cumulative = np.minimum(np.cumsum(probs), 1.0)
    protection = ProtectionFunction(
        state.grid, tuple(float(g) for g in cumulative)
    )
    state.rounds_played += 1
    log = RoundLog(
        t=state.rounds_played,
        theta=pip,
        decision=f"mixture over {len(state.levels)} threshold levels",
        ratio=float(ratio),
        ratio_sampled=None,
        benchmark=state.benchmark(pip),
        learner_key=key,
    )
    return protection, log
