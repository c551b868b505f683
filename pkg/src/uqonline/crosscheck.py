"""Brute-force cross-validation of the solvers against independent oracles.

Each check re-derives a quantity by direct enumeration or execution and
compares it with the solver output; these back the `oracle-check` command.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Pip
from .harness.rng import SplitMix64
from . import lp
from .ski_rental import (
    PurchaseDistribution,
    build_rsr_lp_truncated,
    continuous_drcr_oracle,
    drcr_oracle,
    dsr_buy_day,
    dsr_drcr,
    dsr_pip_drcr,
    solve_rsr,
)
from .online_search import drcr_oracle_search, solve_pfa, worst_case_alpha, worst_case_protection

__all__ = ["CheckResult", "CheckReport", "ski_crosscheck", "search_crosscheck"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst_gap: float
    detail: str


@dataclass(frozen=True)
class CheckReport:
    problem: str
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def random_pips(rng: SplitMix64, count: int, max_buy_cost: int = 12
                ) -> list[tuple[Pip, int]]:
    """Random integer interval predictions with matching buy costs."""
    out = []
    for _ in range(count):
        B = rng.randint(2, max_buy_cost)
        ell = rng.randint(1, 3 * B)
        u = rng.randint(ell, 3 * B)
        delta = round(rng.uniform(), 3)
        out.append((Pip(float(ell), float(u), delta), B))
    return out


def random_distribution(rng: SplitMix64, max_day: int) -> PurchaseDistribution:
    size = rng.randint(1, max_day)
    days = sorted(set(rng.randint(1, max_day) for _ in range(size)))
    weights = np.array([rng.uniform() + 1e-9 for _ in days])
    weights /= weights.sum()
    return PurchaseDistribution(tuple(days), tuple(float(w) for w in weights))


def ski_crosscheck(trials: int = 20, seed: int = 0) -> CheckReport:
    rng = SplitMix64(seed).derive("ski-crosscheck")
    pips = random_pips(rng, trials)
    checks = []

    # the ancillary program's optimum must equal the brute-force ratio of the
    # policy it returns
    worst = 0.0
    for pip, B in pips:
        sol = solve_rsr(pip, B)
        worst = max(worst, abs(drcr_oracle(sol.policy, pip, B) - sol.drcr))
    checks.append(CheckResult(
        "lp-objective-matches-policy-oracle", worst <= 1e-6, worst, "tol 1e-6"))

    # no sampled distribution may beat the optimum
    worst = 0.0
    for pip, B in pips:
        best = solve_rsr(pip, B).drcr
        for _ in range(100):
            y = random_distribution(rng, 3 * B + 1)
            worst = max(worst, best - drcr_oracle(y, pip, B))
    checks.append(CheckResult(
        "optimum-is-a-lower-bound", worst <= 1e-9, worst, "100 draws per prediction"))

    # randomized optimum never loses to the deterministic closed form
    worst = 0.0
    for pip, B in pips:
        worst = max(worst, solve_rsr(pip, B).drcr - dsr_pip_drcr(pip, B))
    checks.append(CheckResult(
        "randomization-dominates-deterministic", worst <= 1e-9, worst, ""))

    # deterministic closed form vs continuous-horizon scan
    worst = 0.0
    for B in (2, 3):
        for i in range(1, 21):
            P = 0.2 * i * B
            for j in range(0, 11):
                d = j / 10.0
                y = dsr_buy_day(P, d, B)
                worst = max(worst, abs(dsr_drcr(P, d, B)
                                       - continuous_drcr_oracle(y, P, d, B)))
    checks.append(CheckResult(
        "closed-form-matches-horizon-scan", worst <= 1e-6, worst, "tol 1e-6"))

    # reduced program vs truncated full program
    worst = 0.0
    for pip, B in pips[: max(5, trials // 2)]:
        reduced = solve_rsr(pip, B).drcr
        horizon = 3 * max(B, int(pip.upper))
        full = lp.solve(build_rsr_lp_truncated(pip, B, horizon))
        worst = max(worst, abs(reduced - full.objective_value))
    checks.append(CheckResult(
        "reduction-matches-truncated-program", worst <= 1e-6, worst, "tol 1e-6"))

    return CheckReport("ski-rental", tuple(checks))


def search_crosscheck(trials: int = 20, seed: int = 0, m: float = 1.0,
                      M: float = 4.0, eps: float = 0.02) -> CheckReport:
    rng = SplitMix64(seed).derive("search-crosscheck")
    checks = []

    solutions = []
    for _ in range(trials):
        ell = m + rng.uniform() * (M - m)
        u = ell + rng.uniform() * (M - ell)
        delta = round(rng.uniform(), 3)
        pip = Pip(ell, u, delta)
        solutions.append((pip, solve_pfa(pip, m, M, eps)))

    # discrete feasibility of every returned schedule at its certificate
    worst = 0.0
    for pip, sol in solutions:
        grid = sol.protection.grid
        V = np.asarray(grid.values)
        q = np.diff(np.concatenate(([0.0], np.asarray(sol.protection.cumulative))))
        earn = V[0] + np.cumsum((V - V[0]) * q)
        for k, v in enumerate(V):
            bound = sol.eta_hat if grid.k_lower <= k <= grid.k_upper else sol.gamma_hat
            worst = max(worst, v - bound * earn[k])
    checks.append(CheckResult(
        "certificate-satisfies-grid-constraints", worst <= 1e-8, worst, "tol 1e-8"))

    # executed worst-case ratio confirms the certificate
    worst = 0.0
    for pip, sol in solutions:
        oracle = drcr_oracle_search(sol.protection, pip)
        worst = max(worst, abs(oracle - sol.drcr))
    slack = eps * M / m + 1e-6
    checks.append(CheckResult(
        "execution-oracle-confirms-certificate", worst <= slack, worst,
        f"tol {slack:.4g}"))

    # fully distrusted prediction recovers the classic robust ratio
    alpha = worst_case_alpha(m, M)
    prot = worst_case_protection(m, M, 0.005)
    gap = abs(drcr_oracle_search(prot, Pip(m, M, 1.0)) - alpha)
    checks.append(CheckResult(
        "classic-schedule-attains-alpha", gap <= 0.005 * M / m + 1e-3, gap, ""))

    return CheckReport("online-search", tuple(checks))
