"""One-way trading (online search) with interval predictions.

A selling policy over prices in [m, M] is represented by a nondecreasing
protection function G: once the running maximum price reaches v, the policy
has committed to sell G(v) of the unit.  The robust-optimal G for a given
interval prediction comes from a discrete program over a geometric price
grid; this module builds that grid, solves the program through a reciprocal
substitution (1-D convex search over parametric linear programs), executes
policies on price sequences, and cross-checks certificates with a
hard-instance oracle.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .core import DomainError, Pip, RatioSample, SearchInstance
from . import lp
from .ski_rental import SolverFailure

__all__ = [
    "PriceGrid",
    "ProtectionFunction",
    "SearchDrcrSolution",
    "worst_case_alpha",
    "worst_case_protection",
    "build_grid",
    "solve_pfa",
    "pfa_objective_profile",
    "pfa_run",
    "hard_instance",
    "drcr_oracle_search",
]

_GSS_INV = 2.0 / (1.0 + math.sqrt(5.0))


@dataclass(frozen=True)
class PriceGrid:
    """Sorted discrete price levels with the prediction endpoints indexed.

    values[k_lower] and values[k_upper] are the interval ends; consecutive
    levels never differ by more than the construction factor 1 + eps.
    """

    values: tuple[float, ...]
    k_lower: int
    k_upper: int

    def __post_init__(self) -> None:
        v = self.values
        if len(v) < 1:
            raise DomainError("grid must be nonempty")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise DomainError("grid values must be strictly increasing")
        if not (0 <= self.k_lower <= self.k_upper < len(v)):
            raise DomainError("window indices out of range")

    @property
    def floor(self) -> float:
        return self.values[0]

    @property
    def ceiling(self) -> float:
        return self.values[-1]


@dataclass(frozen=True)
class ProtectionFunction:
    """Piecewise-constant cumulative selling schedule over a price grid:
    G(v) = cumulative[k] for v in [values[k], values[k+1])."""

    grid: PriceGrid
    cumulative: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.cumulative) != len(self.grid.values):
            raise DomainError("one cumulative level per grid point required")
        prev = 0.0
        for g in self.cumulative:
            if g < prev - 1e-9 or g > 1.0 + 1e-9:
                raise DomainError("cumulative levels must be nondecreasing in [0, 1]")
            prev = max(prev, g)

    def value_at(self, price: float) -> float:
        idx = bisect.bisect_right(self.grid.values, price) - 1
        if idx < 0:
            return 0.0
        return min(1.0, self.cumulative[idx])


@dataclass(frozen=True)
class SearchDrcrSolution:
    eta_hat: float
    gamma_hat: float
    drcr: float
    protection: ProtectionFunction


def worst_case_alpha(m: float, M: float, tol: float = 1e-10) -> float:
    """Optimal robust ratio with no prediction: the root of
    alpha = ln((M - m) / ((alpha - 1) m)) on (1, inf), by bisection."""
    if not (0 < m < M):
        raise DomainError(f"need 0 < m < M, got ({m}, {M})")

    def f(alpha: float) -> float:
        return alpha - math.log((M - m) / ((alpha - 1.0) * m))

    lo = 1.0 + 1e-14
    hi = 2.0
    while f(hi) < 0:
        hi *= 2.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def build_grid(m: float, M: float, lower: float, upper: float, eps: float) -> PriceGrid:
    """Geometric levels m(1+eps)^k joined with the interval ends and M.

    Duplicates within relative 1e-12 collapse onto the exact special value,
    so values[k_lower] == lower and values[k_upper] == upper hold exactly.
    """
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if not (0 < m <= lower <= upper <= M):
        raise DomainError(
            f"need 0 < m <= lower <= upper <= M, got m={m} l={lower} u={upper} M={M}"
        )
    n_geo = int(math.floor(math.log(M / m) / math.log1p(eps)))
    values = [float(m) * (1.0 + eps) ** k for k in range(n_geo + 1)]
    for special in (float(lower), float(upper), float(M)):
        hit = None
        for i, v in enumerate(values):
            if abs(v - special) <= 1e-12 * max(1.0, abs(special)):
                hit = i
                break
        if hit is None:
            values.append(special)
        else:
            values[hit] = special
    values = sorted(set(values))
    k_lower = values.index(lower)
    k_upper = values.index(upper)
    return PriceGrid(tuple(values), k_lower, k_upper)


def worst_case_protection(m: float, M: float, grid_eps: float) -> ProtectionFunction:
    """Closed-form robust-optimal schedule sampled onto a geometric grid:
    zero below alpha*m, then ln((v - m) / ((alpha - 1) m)) / alpha up to 1 at M."""
    alpha = worst_case_alpha(m, M)
    grid = build_grid(m, M, m, M, grid_eps)

    def g(v: float) -> float:
        if v < alpha * m:
            return 0.0
        return min(1.0, math.log((v - m) / ((alpha - 1.0) * m)) / alpha)

    return ProtectionFunction(grid, tuple(g(v) for v in grid.values))


# ---------------------------------------------------------------------------
# Robust-optimal protection via the discrete program
# ---------------------------------------------------------------------------

class _ParametricSeller:
    """Inner linear programs of the reciprocal substitution.

    With a = 1/eta and b = 1/gamma the discrete program's constraints are
    linear in (a, b, q): inside the prediction window a*V_k <= m + S_k and
    outside b*V_k <= m + S_k, where S_k = sum_{i<=k} (V_i - m) q_i.  For a
    fixed a, maximizing b is a linear program; the outer objective
    f(a) = (1-delta)/a + delta/b*(a) is convex (b* is a concave partial
    maximum over a convex set, and 1/positive-concave is convex).
    """

    def __init__(self, grid: PriceGrid, delta: float) -> None:
        self.grid = grid
        self.delta = delta
        V = np.asarray(grid.values)
        K = V.size
        in_window = np.zeros(K, dtype=bool)
        in_window[grid.k_lower : grid.k_upper + 1] = True
        self.V = V
        self.in_window = in_window
        self._m = float(V[0])

        # equality form over [b, q_1..q_K] with one slack per row (added by
        # the engine): level rows, the mass budget, and b <= a; only the rhs
        # depends on the search parameter a
        coeffs = np.zeros((K + 2, K + 1))
        gain = V - V[0]  # selling credit of each level relative to the floor
        for k in range(K):
            coeffs[k, 1 : k + 2] = -gain[: k + 1]
            if not in_window[k]:
                coeffs[k, 0] = V[k]
        coeffs[K, 1:] = 1.0
        coeffs[K + 1, 0] = 1.0
        cost = np.zeros(K + 1)
        cost[0] = -1.0  # maximize b
        self._engine = lp.ParametricRhsLp(coeffs, cost)

    def inner_solve(self, a: float) -> Optional[tuple[float, np.ndarray]]:
        K = self.V.size
        rhs = np.full(K + 2, self._m)
        rhs[:K][self.in_window] = self._m - a * self.V[self.in_window]
        rhs[K] = 1.0
        rhs[K + 1] = a
        status, x = self._engine.solve_rhs(rhs)
        if status is lp.LpStatus.INFEASIBLE:
            return None
        if status is not lp.LpStatus.OPTIMAL:
            raise SolverFailure(f"inner program returned {status.value}")
        return float(x[0]), np.maximum(x[1:], 0.0)

    def refresh(self) -> None:
        self._engine.refactorize()

    def verify(self, a: float, b: float, q: np.ndarray, tol: float = 1e-8) -> None:
        """Residual check of a candidate against the discrete constraints."""
        earn = self._m + np.cumsum((self.V - self._m) * q)
        lhs = np.where(self.in_window, a * self.V, b * self.V)
        if np.any(lhs > earn + tol) or q.sum() > 1.0 + tol:
            raise SolverFailure("schedule fails the discrete constraints")

    def value(self, a: float) -> float:
        res = self.inner_solve(a)
        if res is None:
            return math.inf
        b, _ = res
        if b <= 0:
            return math.inf
        return (1.0 - self.delta) / a + self.delta / b


def _golden_section(f: Callable[[float], float], lo: float, hi: float,
                    tol: float) -> float:
    c = hi - _GSS_INV * (hi - lo)
    d = lo + _GSS_INV * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if math.isinf(fd) or fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _GSS_INV * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GSS_INV * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def solve_pfa(
    pip: Pip, m: float, M: float, eps: float, fallback_grid: int = 200
) -> SearchDrcrSolution:
    """Robust-optimal protection function for an interval prediction.

    Builds the geometric grid, minimizes (1-delta)/a + delta/b*(a) by
    golden-section search to width 1e-6 with a uniform fallback grid guarding
    against non-unimodality, then certifies the executed schedule: the
    returned eta_hat/gamma_hat/drcr carry the (1+eps) discretization factor,
    so drcr is a true upper bound on the schedule's robust ratio and exceeds
    the exact optimum by at most eps*M/m.
    """
    if not (m <= pip.lower <= pip.upper <= M):
        raise DomainError("prediction interval must lie within [m, M]")
    grid = build_grid(m, M, pip.lower, pip.upper, eps)
    seller = _ParametricSeller(grid, pip.delta)

    cache: dict[float, float] = {}

    def f(a: float) -> float:
        if a not in cache:
            cache[a] = seller.value(a)
        return cache[a]

    # the all-at-floor schedule already achieves ratio M/m, so the optimum
    # never pushes eta above 5*M/m (delta-weighted both ways); a = 1/eta
    # therefore stays above 0.2 * m/M
    lo = 0.2 * m / M
    hi = 1.0
    a_best = _golden_section(f, lo, hi, 1e-6)
    f_best = f(a_best)

    if fallback_grid > 0:
        probes = np.linspace(lo, hi, fallback_grid)
        step = probes[1] - probes[0] if fallback_grid > 1 else hi - lo
        for a in probes:
            a = float(a)
            if f(a) < f_best - 1e-9:
                refined = _golden_section(
                    f, max(lo, a - step), min(hi, a + step), 1e-6
                )
                if f(refined) < f_best:
                    a_best, f_best = refined, f(refined)
                elif f(a) < f_best:
                    a_best, f_best = a, f(a)

    seller.refresh()
    res = seller.inner_solve(a_best)
    if res is None or math.isinf(f_best):
        raise SolverFailure("no feasible schedule found; inputs out of contract")
    b_best, q = res
    seller.verify(a_best, b_best, q)

    # mass at the floor earns nothing along a rising sequence and only burns
    # budget; an equally optimal schedule drops it
    gain = seller.V - seller.V[0]
    q = np.where(gain <= 0, 0.0, np.maximum(q, 0.0))
    cumulative = np.minimum(np.cumsum(q), 1.0)
    protection = ProtectionFunction(grid, tuple(float(g) for g in cumulative))

    scale = 1.0 + eps
    eta_hat = scale / a_best
    gamma_hat = scale / b_best
    drcr = (1.0 - pip.delta) * eta_hat + pip.delta * gamma_hat
    return SearchDrcrSolution(eta_hat, gamma_hat, drcr, protection)


def pfa_objective_profile(
    pip: Pip, m: float, M: float, eps: float, a_values: Sequence[float]
) -> list[float]:
    """Diagnostic: the outer objective f(a) sampled at given points."""
    grid = build_grid(m, M, pip.lower, pip.upper, eps)
    seller = _ParametricSeller(grid, pip.delta)
    return [seller.value(float(a)) for a in a_values]


# ---------------------------------------------------------------------------
# Execution and oracles
# ---------------------------------------------------------------------------

def pfa_run(protection: ProtectionFunction, instance: SearchInstance) -> RatioSample:
    """Execute the schedule on a price sequence.

    Sells the protection increment whenever a price extends the running
    maximum, then compulsorily dumps the remainder at the final price.  The
    committed level starts at zero, so mass scheduled at the floor sells at
    the first price rather than being silently stranded.
    """
    grid = protection.grid
    slack = 1e-9 * max(1.0, grid.ceiling)
    if not all(grid.floor - slack <= p <= grid.ceiling + slack for p in instance.prices):
        raise DomainError("instance prices must lie within the protection grid range")

    prices = instance.prices
    level = 0.0
    profit = 0.0
    for p in prices[:-1]:
        target = protection.value_at(p)
        if target > level:
            profit += (target - level) * p
            level = target
    profit += (1.0 - level) * prices[-1]
    opt = max(prices)
    return RatioSample(alg_value=profit, opt_value=opt, ratio=opt / profit)


def hard_instance(peak: float, m: float, steps: int) -> SearchInstance:
    """Geometric ramp from the floor up to the peak, then a crash back to m.
    The offline optimum on such an instance is exactly the peak."""
    if steps < 2:
        raise DomainError(f"steps must be >= 2, got {steps}")
    if peak < m:
        raise DomainError(f"peak {peak} below floor {m}")
    if peak == m:
        prices = [m] * steps
    else:
        ratio = (peak / m) ** (1.0 / (steps - 1))
        prices = [m * ratio**i for i in range(steps - 1)] + [peak]
    prices.append(m)
    return SearchInstance(tuple(prices), m, max(peak, m))


def _ramp_through_grid(protection: ProtectionFunction, peak: float) -> SearchInstance:
    """Rising sequence visiting every grid level up to the peak, then m."""
    grid = protection.grid
    m = grid.floor
    prices = [v for v in grid.values if v <= peak]
    if not prices or prices[-1] < peak:
        prices.append(peak)
    prices.append(m)
    return SearchInstance(tuple(prices), m, max(peak, m))


def drcr_oracle_search(protection: ProtectionFunction, pip: Pip,
                       scan_points: int = 400) -> float:
    """Brute-force robust ratio of an arbitrary schedule.

    Executes the schedule (via pfa_run, independently of any solver
    internals) on hard instances peaking at every grid level plus an even
    scan of the price range, and splits the worst ratios by whether the peak
    conforms to the prediction interval.
    """
    grid = protection.grid
    m, M = grid.floor, grid.ceiling
    if not (m <= pip.lower <= pip.upper <= M):
        raise DomainError("prediction interval must lie within the grid range")

    peaks = set(grid.values)
    peaks.update(np.linspace(m, M, scan_points))
    peaks.update((pip.lower, pip.upper))

    eta = 1.0
    gamma = 1.0
    for peak in sorted(peaks):
        r = pfa_run(protection, _ramp_through_grid(protection, float(peak))).ratio
        gamma = max(gamma, r)
        if pip.lower <= peak <= pip.upper:
            eta = max(eta, r)
    return (1.0 - pip.delta) * eta + pip.delta * gamma
