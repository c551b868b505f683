"""Ski-rental policies under interval predictions.

Closed-form deterministic rules (continuous-time model), the reduced linear
program behind the optimal randomized policy, classic baselines, and
brute-force robust-ratio oracles used for cross-validation.

Cost convention: buying on day t costs (buy_cost + t - 1), i.e. t - 1 rental
days followed by the purchase; the offline optimum on an N-day instance is
min(N, buy_cost).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DomainError, Pip, SkiInstance
from . import lp

__all__ = [
    "PurchaseDistribution",
    "DrcrSolution",
    "SolverFailure",
    "chi",
    "meta_lambda",
    "la_purohit_buy_day",
    "zeta",
    "dsr_buy_day",
    "dsr_drcr",
    "dsr_pip_buy_day",
    "dsr_pip_drcr",
    "build_rsr_lp",
    "build_rsr_lp_truncated",
    "solve_rsr",
    "expected_cost",
    "drcr_oracle",
    "continuous_drcr_oracle",
    "woa_distribution",
    "ftp_buy_day",
]

GOLDEN = (math.sqrt(5.0) + 1.0) / 2.0
RENT_FOREVER = math.inf


class SolverFailure(RuntimeError):
    """The ancillary linear program failed for an input that should be solvable."""


@dataclass(frozen=True)
class PurchaseDistribution:
    """Probability mass over integer buying days."""

    support: tuple[int, ...]
    mass: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.support) != len(self.mass) or not self.support:
            raise DomainError("support and mass must be matching nonempty lists")
        if list(self.support) != sorted(set(self.support)):
            raise DomainError("support must be sorted distinct days")
        if any(d < 1 for d in self.support):
            raise DomainError("buying days must be positive")
        if any(p < 0 for p in self.mass):
            raise DomainError("masses must be nonnegative")
        if abs(sum(self.mass) - 1.0) > 1e-9:
            raise DomainError(f"masses must sum to 1, got {sum(self.mass)}")

    def sample_day(self, u: float) -> int:
        """Inverse-CDF draw from a uniform u in [0, 1)."""
        acc = 0.0
        for day, p in zip(self.support, self.mass):
            acc += p
            if u < acc:
                return day
        return self.support[-1]


@dataclass(frozen=True)
class DrcrSolution:
    eta: float
    gamma: float
    drcr: float
    policy: PurchaseDistribution


def _check_delta(delta: float) -> None:
    if not 0.0 <= delta <= 1.0:
        raise DomainError(f"delta must be in [0, 1], got {delta}")


def chi(delta: float) -> float:
    """Best robust-vs-consistent mix achievable by hedging within the first
    buy_cost days: 1 + 2*sqrt(delta*(1-delta)) up to delta = 1/2, then 2."""
    _check_delta(delta)
    if delta <= 0.5:
        return 1.0 + 2.0 * math.sqrt(delta * (1.0 - delta))
    return 2.0


def meta_lambda(delta: float) -> float:
    """Trust parameter minimizing (1-d)(1+x) + d(1+1/x) over x in (0, 1]."""
    _check_delta(delta)
    if delta >= 0.5:
        return 1.0
    return math.sqrt(delta / (1.0 - delta))


def la_purohit_buy_day(prediction: float, lam: float, buy_cost: float) -> float:
    """Classic prediction-following rule: buy at B/lambda when the prediction
    favors renting, at B*lambda otherwise."""
    if not 0.0 < lam <= 1.0:
        raise DomainError(f"lambda must be in (0, 1], got {lam}")
    if prediction < buy_cost:
        return buy_cost / lam
    return buy_cost * lam


def zeta(delta: float, lower: float, buy_cost: float) -> float:
    """Mixed rent/buy ratio bound for intervals straddling the buy cost."""
    _check_delta(delta)
    if lower <= 0:
        raise DomainError(f"lower must be positive, got {lower}")
    ratio = buy_cost / lower
    if delta < lower / (lower + buy_cost):
        return delta + (1.0 - delta) * ratio + 2.0 * math.sqrt(delta * (1.0 - delta) * ratio)
    return 1.0 + ratio


def dsr_buy_day(prediction: float, delta: float, buy_cost: float) -> float:
    """Optimal deterministic buy time (continuous model) for a point
    prediction trusted with probability 1 - delta."""
    _check_delta(delta)
    if prediction <= 0:
        raise DomainError(f"prediction must be positive, got {prediction}")
    if prediction < buy_cost:
        return float(buy_cost)
    early = buy_cost * meta_lambda(delta)
    if prediction > GOLDEN * buy_cost:
        return early
    if chi(delta) <= delta + prediction / buy_cost:
        return early
    return float(prediction)


def dsr_drcr(prediction: float, delta: float, buy_cost: float) -> float:
    """Closed-form robust ratio achieved by dsr_buy_day."""
    _check_delta(delta)
    if prediction <= 0:
        raise DomainError(f"prediction must be positive, got {prediction}")
    if prediction < buy_cost:
        return 1.0 + delta
    if prediction > GOLDEN * buy_cost:
        return chi(delta)
    return min(chi(delta), delta + prediction / buy_cost)


def dsr_pip_buy_day(pip: Pip, buy_cost: float) -> float:
    """Deterministic buy time for an interval prediction (continuous model)."""
    ell, u, delta = pip.lower, pip.upper, pip.delta
    if ell <= 0:
        raise DomainError("interval must have a positive lower end")
    if u < buy_cost:
        return float(buy_cost)
    if buy_cost < ell:
        if chi(delta) <= delta + u / buy_cost:
            return buy_cost * meta_lambda(delta)
        return float(u)
    # ell <= B <= u
    if zeta(delta, ell, buy_cost) >= 2.0 and delta + u / buy_cost >= 2.0:
        return float(buy_cost)
    if zeta(delta, ell, buy_cost) <= delta + u / buy_cost:
        # argmin of the pro-buy branch; the radical caps at 1 when
        # delta >= ell / (ell + B)
        if buy_cost * delta >= ell * (1.0 - delta):
            return float(ell)
        return ell * math.sqrt(buy_cost * delta / (ell * (1.0 - delta)))
    return float(u)


def dsr_pip_drcr(pip: Pip, buy_cost: float) -> float:
    """Closed-form robust ratio of the deterministic interval rule."""
    ell, u, delta = pip.lower, pip.upper, pip.delta
    if ell <= 0:
        raise DomainError("interval must have a positive lower end")
    if u < buy_cost:
        return 1.0 + delta
    if buy_cost < ell:
        return min(chi(delta), delta + u / buy_cost)
    return min(zeta(delta, ell, buy_cost), delta + u / buy_cost, 2.0)


# ---------------------------------------------------------------------------
# Randomized policy via the reduced linear program
# ---------------------------------------------------------------------------

def _integer_interval(pip: Pip) -> tuple[int, int]:
    for v in (pip.lower, pip.upper):
        if abs(v - round(v)) > 1e-9:
            raise DomainError(f"interval end {v} is not an integer day")
    ell, u = int(round(pip.lower)), int(round(pip.upper))
    if not 1 <= ell <= u:
        raise DomainError(f"need 1 <= lower <= upper, got [{ell}, {u}]")
    return ell, u


def _check_buy_cost(buy_cost: int) -> int:
    if not isinstance(buy_cost, int) or buy_cost < 1:
        raise DomainError(f"buy_cost must be a positive integer, got {buy_cost}")
    return buy_cost


def _rsr_structure(ell: int, u: int, buy_cost: int) -> tuple[list[int], list[int]]:
    """Support days and constraint days of the reduced program."""
    B = buy_cost
    if u < B:
        support = list(range(1, B + 1))
        days = list(range(1, B + 1))
    else:
        support = list(range(1, B + 1)) + [u + 1]
        days = list(range(1, B)) + [u, u + 1]
    return support, days


def _rsr_rows(
    support: list[int], days: list[int], ell: int, u: int, buy_cost: int
) -> list[tuple[np.ndarray, str, float]]:
    """Constraint rows over variables [eta, gamma, y_t for t in support].

    Using sum(y) = 1 the expected-cost constraint for horizon N becomes
    N + sum_{t <= N} (B + t - 1 - N) y_t <= r_N * min(N, B) with r_N = eta
    inside the prediction window and gamma outside.
    """
    B = buy_cost
    k = len(support)
    rows: list[tuple[np.ndarray, str, float]] = []
    for N in days:
        row = np.zeros(2 + k)
        for j, t in enumerate(support):
            if t <= N:
                row[2 + j] = B + t - 1 - N
        r_idx = 0 if ell <= N <= u else 1
        row[r_idx] = -float(min(N, B))
        rows.append((row, lp.LEQ, -float(N)))
    ones = np.zeros(2 + k)
    ones[2:] = 1.0
    rows.append((ones, lp.EQ, 1.0))
    order = np.zeros(2 + k)
    order[0], order[1] = 1.0, -1.0  # eta <= gamma
    rows.append((order, lp.LEQ, 0.0))
    return rows


def build_rsr_lp(pip: Pip, buy_cost: int) -> lp.LinearProgram:
    """Reduced program for the optimal randomized policy: O(B) variables
    (days 1..B, plus u+1 when the window reaches the buy cost) and O(B)
    constraint days."""
    ell, u = _integer_interval(pip)
    B = _check_buy_cost(buy_cost)
    support, days = _rsr_structure(ell, u, B)
    k = len(support)
    objective = np.zeros(2 + k)
    objective[0] = 1.0 - pip.delta
    objective[1] = pip.delta
    lower = np.zeros(2 + k)
    lower[0] = lower[1] = 1.0
    return lp.LinearProgram(
        objective, _rsr_rows(support, days, ell, u, B), lower=lower
    )


def build_rsr_lp_truncated(pip: Pip, buy_cost: int, horizon: int) -> lp.LinearProgram:
    """Unreduced program truncated at `horizon`: variables y(1..horizon) and
    constraint days 1..horizon.  Validation oracle for the reduction."""
    ell, u = _integer_interval(pip)
    B = _check_buy_cost(buy_cost)
    if horizon < max(B, u) + 1:
        raise DomainError("truncation horizon too short to be exact")
    support = list(range(1, horizon + 1))
    days = list(range(1, horizon + 1))
    k = len(support)
    objective = np.zeros(2 + k)
    objective[0] = 1.0 - pip.delta
    objective[1] = pip.delta
    lower = np.zeros(2 + k)
    lower[0] = lower[1] = 1.0
    return lp.LinearProgram(
        objective, _rsr_rows(support, days, ell, u, B), lower=lower
    )


def solve_rsr(pip: Pip, buy_cost: int) -> DrcrSolution:
    """Solve the reduced program and return the optimal randomized policy
    with its consistency/robustness split."""
    ell, u = _integer_interval(pip)
    B = _check_buy_cost(buy_cost)
    program = build_rsr_lp(pip, B)
    sol = lp.solve(program)
    if sol.status is not lp.LpStatus.OPTIMAL:
        raise SolverFailure(
            f"reduced program returned {sol.status.value} for "
            f"pip=[{ell},{u}] delta={pip.delta} B={B}"
        )
    support, _ = _rsr_structure(ell, u, B)
    eta, gamma = float(sol.x[0]), float(sol.x[1])
    mass = np.maximum(sol.x[2:], 0.0)
    keep = mass > 1e-12
    days = tuple(int(t) for t, k in zip(support, keep) if k)
    weights = mass[keep]
    weights = weights / weights.sum()
    policy = PurchaseDistribution(days, tuple(float(w) for w in weights))
    return DrcrSolution(eta, gamma, float(sol.objective_value), policy)


# ---------------------------------------------------------------------------
# Cost evaluation and brute-force oracles
# ---------------------------------------------------------------------------

def expected_cost(y: PurchaseDistribution, instance: SkiInstance) -> float:
    """Expected spend of the randomized policy on an N-day instance."""
    N, B = instance.horizon, instance.buy_cost
    total = 0.0
    for t, p in zip(y.support, y.mass):
        total += (B + t - 1) * p if t <= N else N * p
    return total


def drcr_oracle(y: PurchaseDistribution, pip: Pip, buy_cost: int) -> float:
    """Brute-force robust ratio of an arbitrary distribution.

    The ratio is constant once N exceeds both the buy cost and the largest
    support day, so scanning up to that point plus one is exact.
    """
    ell, u = _integer_interval(pip)
    B = _check_buy_cost(buy_cost)
    horizon = max(B, y.support[-1]) + 1

    def ratio(N: int) -> float:
        return expected_cost(y, SkiInstance(N, B)) / min(N, B)

    eta = max(ratio(N) for N in range(ell, u + 1))
    gamma = max(ratio(N) for N in range(1, horizon + 1))
    gamma = max(gamma, eta)
    return (1.0 - pip.delta) * eta + pip.delta * gamma


def continuous_drcr_oracle(
    buy_day: float,
    prediction: float,
    delta: float,
    buy_cost: float,
    grid_points: int = 2000,
) -> float:
    """Robust ratio of buying at a fixed continuous time, found by scanning
    horizons over a fine grid plus the exact breakpoints.

    Independent of the closed forms above: evaluates the raw cost ratio
    directly.  Buying at time Y means renting through Y, so a horizon ending
    exactly at Y pays N, not Y + B; this is the continuous counterpart of
    the discrete rule where day t costs B + t - 1 (day t starts at time
    t - 1).
    """
    _check_delta(delta)
    Y, B, P = buy_day, buy_cost, prediction

    def ratio(N: float) -> float:
        alg = N if N <= Y else Y + B
        return alg / min(N, B)

    eta = ratio(P)
    if delta == 0.0:
        return eta

    top = max(Y, B, P) + 1.0
    cands = list(np.linspace(1e-9, top, grid_points))
    for bp in (Y - 1e-9, Y, Y + 1e-9, B, P, top):
        if bp > 0:
            cands.append(bp)
    gamma = max(ratio(N) for N in cands)
    return (1.0 - delta) * eta + delta * gamma


def woa_distribution(buy_cost: int) -> PurchaseDistribution:
    """Worst-case optimal randomized policy over days 1..B; its robust ratio
    is 1 / (1 - (1 - 1/B)^B), approaching e/(e-1) for large B."""
    B = _check_buy_cost(buy_cost)
    base = (B - 1) / B
    norm = B * (1.0 - base**B)
    mass = tuple(base ** (B - j) / norm for j in range(1, B + 1))
    return PurchaseDistribution(tuple(range(1, B + 1)), mass)


def ftp_buy_day(prediction: float, buy_cost: float, literal: bool = False) -> float:
    """Follow-the-prediction baseline: buy on day 1 when the prediction says
    the horizon reaches the buy cost, otherwise rent forever (math.inf).

    literal=True inverts the comparison (buys only when the prediction is
    below the buy cost); see the configuration switch `ftp-literal`.
    """
    buys = prediction < buy_cost if literal else prediction >= buy_cost
    return 1.0 if buys else RENT_FOREVER
