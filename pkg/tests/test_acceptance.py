"""Acceptance gate: every shipped-contract criterion at its stated tolerance.

Each test prints one PASS/FAIL line (visible regardless of capture) with the
measured quantity and elapsed wall time.
"""

import math
import time

from uqonline import lp
from uqonline.core import Pip
from uqonline.crosscheck import random_distribution, random_pips
from uqonline.harness import ExperimentConfig, SplitMix64, generate_ski_stream, run_experiment
from uqonline.online_learning import (
    DynamicSkiLearner,
    eg_init,
    ol_dynamic_ski_round,
    policy_regret,
)
from uqonline.online_search import (
    build_grid,
    drcr_oracle_search,
    solve_pfa,
    worst_case_alpha,
)
from uqonline.ski_rental import (
    build_rsr_lp_truncated,
    continuous_drcr_oracle,
    drcr_oracle,
    dsr_buy_day,
    dsr_drcr,
    dsr_pip_drcr,
    solve_rsr,
)


def _report(capsys, index, ok, detail, elapsed):
    with capsys.disabled():
        mark = "PASS" if ok else "FAIL"
        print(f"[{mark}] criterion {index}: {detail} ({elapsed:.2f}s)")
    assert ok, f"criterion {index}: {detail}"


def test_criterion_1_closed_form_vs_oracle(capsys):
    start = time.perf_counter()
    B = 2.0
    worst = 0.0
    for i in range(1, 41):
        P = 0.2 * i
        for j in range(0, 51):
            delta = 0.02 * j
            y = dsr_buy_day(P, delta, B)
            gap = abs(dsr_drcr(P, delta, B) - continuous_drcr_oracle(y, P, delta, B))
            worst = max(worst, gap)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed < 5.0
    _report(capsys, 1, ok,
            f"deterministic closed form vs horizon scan, worst gap {worst:.2e}",
            elapsed)


def test_criterion_2_purely_robust_closed_forms(capsys):
    start = time.perf_counter()
    gaps = []
    for B in (2, 10):
        target = 1.0 / (1.0 - (1.0 - 1.0 / B) ** B)
        drcr = solve_rsr(Pip(1.0, 1.0, 1.0), B).drcr
        gaps.append(abs(drcr - target))
    elapsed = time.perf_counter() - start
    ok = max(gaps) <= 1e-6
    _report(capsys, 2, ok,
            f"fully distrusted optimum matches 1/(1-(1-1/B)^B), worst gap {max(gaps):.2e}",
            elapsed)


def test_criterion_3_reduction_equivalence(capsys):
    start = time.perf_counter()
    rng = SplitMix64(301).derive("reduction-acceptance")
    worst = 0.0
    for _ in range(50):
        B = rng.randint(1, 12)
        ell = rng.randint(1, 3 * B)
        u = rng.randint(ell, 3 * B)
        pip = Pip(float(ell), float(u), round(rng.uniform(), 3))
        reduced = solve_rsr(pip, B).drcr
        full = lp.solve(build_rsr_lp_truncated(pip, B, 3 * max(B, u)))
        worst = max(worst, abs(reduced - full.objective_value))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed < 30.0
    _report(capsys, 3, ok,
            f"reduced vs truncated full program on 50 tuples, worst gap {worst:.2e}",
            elapsed)


def _twenty_pips():
    return random_pips(SplitMix64(77).derive("acceptance-pips"), 20)


def test_criterion_4_no_distribution_beats_optimum(capsys):
    start = time.perf_counter()
    rng = SplitMix64(78).derive("acceptance-draws")
    worst = -math.inf
    for pip, B in _twenty_pips():
        best = solve_rsr(pip, B).drcr
        for _ in range(100):
            y = random_distribution(rng, 3 * B + 1)
            worst = max(worst, best - drcr_oracle(y, pip, B))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9
    _report(capsys, 4, ok,
            f"2000 sampled policies never beat the optimum, worst margin {worst:.2e}",
            elapsed)


def test_criterion_5_randomization_dominates(capsys):
    start = time.perf_counter()
    worst = -math.inf
    for pip, B in _twenty_pips():
        worst = max(worst, solve_rsr(pip, B).drcr - dsr_pip_drcr(pip, B))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9
    _report(capsys, 5, ok,
            f"randomized optimum <= deterministic closed form, worst margin {worst:.2e}",
            elapsed)


def test_criterion_6_search_worst_case(capsys):
    start = time.perf_counter()
    alpha = worst_case_alpha(1.0, 4.0)
    in_bracket = 1.6035 <= alpha <= 1.6036
    sol = solve_pfa(Pip(2.0, 2.0, 1.0), 1.0, 4.0, 0.005)
    hi = alpha + 0.005 * 4.0 + 1e-6
    in_window = alpha <= sol.drcr <= hi
    elapsed = time.perf_counter() - start
    ok = in_bracket and in_window and elapsed < 10.0
    _report(capsys, 6, ok,
            f"alpha*={alpha:.6f}, certificate {sol.drcr:.6f} in [{alpha:.6f}, {hi:.6f}]",
            elapsed)


def test_criterion_7_certificates_hold(capsys):
    start = time.perf_counter()
    rng = SplitMix64(702).derive("acceptance-search")
    m, M, eps = 1.0, 4.0, 0.02
    worst_constraint = -math.inf
    worst_oracle = 0.0
    for _ in range(20):
        ell = m + rng.uniform() * (M - m)
        u = ell + rng.uniform() * (M - ell)
        pip = Pip(ell, u, round(rng.uniform(), 3))
        sol = solve_pfa(pip, m, M, eps)
        grid = sol.protection.grid
        cum = sol.protection.cumulative
        earned = grid.values[0]
        prev = 0.0
        acc = 0.0
        for k, v in enumerate(grid.values):
            acc += (v - grid.values[0]) * (cum[k] - prev)
            prev = cum[k]
            earned = grid.values[0] + acc
            bound = sol.eta_hat if grid.k_lower <= k <= grid.k_upper else sol.gamma_hat
            worst_constraint = max(worst_constraint, v - bound * earned)
        oracle = drcr_oracle_search(sol.protection, pip)
        worst_oracle = max(worst_oracle, abs(oracle - sol.drcr))
    elapsed = time.perf_counter() - start
    slack = eps * M / m + 1e-6
    ok = worst_constraint <= 1e-8 and worst_oracle <= slack
    _report(capsys, 7, ok,
            f"constraint residual {worst_constraint:.2e} <= 1e-8, "
            f"oracle gap {worst_oracle:.4f} <= {slack:.4f}",
            elapsed)


def test_criterion_8_monotonicity_suites(capsys):
    start = time.perf_counter()
    rng = SplitMix64(801).derive("monotone")
    ok = True

    # ski rental: 20 delta chains and 20 tightening chains
    for _ in range(20):
        B = rng.randint(2, 10)
        ell = rng.randint(1, 3 * B)
        u = rng.randint(ell, 3 * B)
        prev = 0.0
        for j in range(6):
            drcr = solve_rsr(Pip(float(ell), float(u), j / 5.0), B).drcr
            ok = ok and drcr >= prev - 1e-9
            prev = drcr
    for _ in range(20):
        B = rng.randint(2, 10)
        center = rng.randint(1, 3 * B)
        delta = round(rng.uniform(), 3)
        width = rng.randint(1, 2 * B)
        prev = math.inf
        while width >= 0:
            ell = max(1, center - width)
            u = center + width
            drcr = solve_rsr(Pip(float(ell), float(u), delta), B).drcr
            ok = ok and drcr <= prev + 1e-9
            prev = drcr
            width -= max(1, width // 2) if width else 1

    # online search: endpoints drawn from the geometric levels so the grid
    # is identical along each chain
    m, M, eps = 1.0, 4.0, 0.05
    levels = build_grid(m, M, m, M, eps).values
    for _ in range(20):
        i = rng.randint(0, len(levels) - 1)
        j = rng.randint(i, len(levels) - 1)
        pipv = (levels[i], levels[j])
        prev = 0.0
        for k in range(6):
            drcr = solve_pfa(Pip(*pipv, k / 5.0), m, M, eps).drcr
            ok = ok and drcr >= prev - 1e-7  # 1-D search noise floor
            prev = drcr
    for _ in range(20):
        c = rng.randint(3, len(levels) - 4)
        delta = round(rng.uniform(), 3)
        half = min(c, len(levels) - 1 - c)
        prev = math.inf
        for width in sorted({half, half // 2, half // 4, 0}, reverse=True):
            pip = Pip(levels[c - width], levels[c + width], delta)
            drcr = solve_pfa(pip, m, M, eps).drcr
            ok = ok and drcr <= prev + 1e-7  # 1-D search noise floor
            prev = drcr
    elapsed = time.perf_counter() - start
    _report(capsys, 8, ok,
            "drcr nondecreasing in delta and nonincreasing under tightening",
            elapsed)


def test_criterion_9_eg_regret_bound(capsys):
    start = time.perf_counter()
    ok = True
    detail = []
    for T in (100, 1000):
        learner = eg_init(8, T, 5.0, n_ctx=8)
        rng = SplitMix64(900 + T).derive("adversary")
        best = 5
        played = 0.0
        best_total = 0.0
        for _ in range(T):
            losses = [5.0 * rng.uniform() for _ in range(8)]
            losses[best] = 0.4 * rng.uniform()
            p = learner.probabilities()
            played += float(sum(pi * li for pi, li in zip(p, losses)))
            best_total += losses[best]
            learner.update(losses)
        regret = played - best_total
        bound = 2 * 5 * math.sqrt(T * math.log(8))
        detail.append(f"T={T}: {regret:.1f} <= {bound:.1f}")
        ok = ok and regret <= bound
    elapsed = time.perf_counter() - start
    _report(capsys, 9, ok, "; ".join(detail), elapsed)


def test_criterion_10_experiment_orderings(capsys, tmp_path):
    start = time.perf_counter()
    config = ExperimentConfig(
        problem="ski-rental", T=3000, runs=10, seed=7, B=2, horizon_max=8,
        day_support=(1, 8), sigma_pattern=((10, 0.0), (10, 6.0)),
        confidence=0.90,
        algorithms=("WOA", "FTP", "RSR-PIP", "OL-Dynamic", "OL-Static"),
    )
    result = run_experiment(config, str(tmp_path))
    fe = result.final_excess
    elapsed = time.perf_counter() - start
    checks = [
        fe["OL-Dynamic"] < fe["RSR-PIP"],
        fe["RSR-PIP"] < fe["WOA"],
        fe["OL-Dynamic"] <= fe["OL-Static"] <= fe["WOA"],
        fe["OL-Static"] >= fe["RSR-PIP"] - 0.01,
        fe["FTP"] > fe["OL-Dynamic"],
    ]
    ok = all(checks) and elapsed < 180.0
    summary = ", ".join(f"{k}={v:.4f}" for k, v in sorted(fe.items()))
    _report(capsys, 10, ok, f"orderings at t=3000 over 10 runs: {summary}", elapsed)


def test_criterion_11_policy_regret_sublinear(capsys):
    start = time.perf_counter()
    T = 1500
    config = ExperimentConfig(T=2 * T, runs=1, seed=7)
    benchmark_cache: dict = {}
    r_half, r_full = [], []
    for s in range(10):
        stream = generate_ski_stream(config, config.seed + s)
        state = DynamicSkiLearner(
            n_max=config.horizon_max, buy_cost=config.B, horizon=2 * T,
            benchmark_cache=benchmark_cache,
        )
        logs = []
        for rnd in stream:
            _, log = ol_dynamic_ski_round(state, rnd.pip, rnd.instance)
            logs.append(log)
        regret, _ = policy_regret(logs)
        r_half.append(regret[T - 1])
        r_full.append(regret[2 * T - 1])
    avg_half = sum(r_half) / len(r_half)
    avg_full = sum(r_full) / len(r_full)
    elapsed = time.perf_counter() - start
    ok = avg_full <= 1.85 * avg_half
    _report(capsys, 11, ok,
            f"regret(2T)={avg_full:.1f} <= 1.85 * regret(T)={1.85 * avg_half:.1f} "
            f"over 10 seeds", elapsed)
