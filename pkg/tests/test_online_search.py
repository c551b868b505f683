import math

import pytest

from uqonline.core import DomainError, Pip, SearchInstance
from uqonline.harness.rng import SplitMix64
from uqonline.online_search import (
    ProtectionFunction,
    build_grid,
    drcr_oracle_search,
    hard_instance,
    pfa_objective_profile,
    pfa_run,
    solve_pfa,
    worst_case_alpha,
    worst_case_protection,
)


def test_worst_case_alpha_values():
    assert worst_case_alpha(1, 4) == pytest.approx(1.60355, abs=5e-5)
    assert worst_case_alpha(1, 10) == pytest.approx(2.1013, abs=5e-4)
    assert worst_case_alpha(1, 1.0001) == pytest.approx(1.0, abs=1e-3)
    with pytest.raises(DomainError):
        worst_case_alpha(2, 2)


def test_worst_case_alpha_satisfies_root_equation():
    for m, M in ((1, 4), (0.5, 7), (2, 9)):
        a = worst_case_alpha(m, M)
        assert a == pytest.approx(math.log((M - m) / ((a - 1) * m)), abs=1e-8)


def test_build_grid_examples():
    g = build_grid(1, 4, 2, 3, 1.0)
    assert g.values == (1.0, 2.0, 3.0, 4.0)
    assert g.values[g.k_lower] == 2.0
    assert g.values[g.k_upper] == 3.0
    g = build_grid(1, 4, 1, 4, 1.0)
    assert g.values == (1.0, 2.0, 4.0)
    assert g.k_lower == 0 and g.k_upper == 2


def test_build_grid_ratio_bound():
    for eps in (1.0, 0.3, 0.05):
        g = build_grid(1, 4, 1.37, 2.6, eps)
        for a, b in zip(g.values, g.values[1:]):
            assert b / a <= 1.0 + eps + 1e-12
        assert g.values[0] == 1.0 and g.values[-1] == 4.0
    with pytest.raises(DomainError):
        build_grid(1, 4, 0.5, 3, 0.1)


def test_worst_case_protection_shape():
    m, M = 1.0, 4.0
    alpha = worst_case_alpha(m, M)
    prot = worst_case_protection(m, M, 0.01)
    # zero below alpha*m, one at the ceiling, half way at the inverted point
    assert prot.value_at(alpha * m - 1e-6) == 0.0
    assert prot.cumulative[-1] == pytest.approx(1.0, abs=1e-8)
    midpoint = m + (alpha * m - m) * math.exp(alpha / 2)
    assert prot.value_at(midpoint) == pytest.approx(0.5, abs=0.02)


def test_solve_pfa_fully_distrusted_certificate():
    m, M, eps = 1.0, 4.0, 0.01
    alpha = worst_case_alpha(m, M)
    sol = solve_pfa(Pip(2.0, 2.0, 1.0), m, M, eps)
    assert alpha - 1e-9 <= sol.drcr <= alpha + eps * M / m + 1e-6
    assert sol.eta_hat <= sol.gamma_hat + 1e-12


def test_solve_pfa_trusted_extremes():
    sol = solve_pfa(Pip(4.0, 4.0, 0.0), 1.0, 4.0, 0.01)
    assert sol.drcr == pytest.approx(1.0, abs=0.05)  # 1 + discretization factor
    top_mass = sol.protection.cumulative[-1] - sol.protection.cumulative[-2]
    assert top_mass == pytest.approx(1.0, abs=1e-6)
    sol = solve_pfa(Pip(1.0, 1.0, 0.0), 1.0, 4.0, 0.01)
    assert sol.drcr == pytest.approx(1.0, abs=0.05)


def test_solve_pfa_invariants():
    rng = SplitMix64(21).derive("pfa")
    m, M, eps = 1.0, 4.0, 0.05
    for _ in range(6):
        ell = m + rng.uniform() * (M - m)
        u = ell + rng.uniform() * (M - ell)
        delta = round(rng.uniform(), 3)
        sol = solve_pfa(Pip(ell, u, delta), m, M, eps)
        grid = sol.protection.grid
        cum = sol.protection.cumulative
        assert all(b >= a - 1e-12 for a, b in zip(cum, cum[1:]))
        assert cum[-1] <= 1.0 + 1e-9
        assert 1.0 - 1e-9 <= sol.eta_hat <= sol.gamma_hat + 1e-9
        mix = (1 - delta) * sol.eta_hat + delta * sol.gamma_hat
        assert sol.drcr == pytest.approx(mix, abs=1e-9)
        # discrete constraints hold at the certificate
        earned = [grid.values[0]] * len(grid.values)
        acc = 0.0
        prev = 0.0
        for k, v in enumerate(grid.values):
            acc += (v - grid.values[0]) * (cum[k] - prev)
            prev = cum[k]
            earned[k] = grid.values[0] + acc
            bound = sol.eta_hat if grid.k_lower <= k <= grid.k_upper else sol.gamma_hat
            assert v <= bound * earned[k] + 1e-8


def test_pfa_objective_unimodal_probe():
    # no point of a 200-point sweep may beat the search result by more than
    # the search tolerance
    m, M, eps = 1.0, 4.0, 0.1
    for pip in (Pip(1.5, 3.0, 0.4), Pip(2.0, 2.0, 1.0), Pip(1.0, 4.0, 0.15)):
        grid = [0.2 * m / M + i * (1.0 - 0.2 * m / M) / 199 for i in range(200)]
        values = pfa_objective_profile(pip, m, M, eps, grid)
        finite = [v for v in values if math.isfinite(v)]
        assert finite, "objective must be finite somewhere"
        searched = solve_pfa(pip, m, M, eps).drcr / (1 + eps)
        assert searched <= min(finite) + 1e-6


def test_pfa_run_at_ceiling_stays_within_certificate():
    # a long ramp to the ceiling realizes at most the certified worst ratio
    m, M, eps = 1.0, 4.0, 0.05
    for delta in (0.0, 0.5, 1.0):
        sol = solve_pfa(Pip(1.5, 3.0, delta), m, M, eps)
        ratio = pfa_run(sol.protection, hard_instance(M, m, 400)).ratio
        assert ratio <= sol.gamma_hat + 1e-9


def test_pfa_run_flat_prices():
    prot = worst_case_protection(1.0, 4.0, 0.02)
    flat = SearchInstance((1.0, 1.0, 1.0), 1.0, 4.0)
    sample = pfa_run(prot, flat)
    assert sample.ratio == pytest.approx(1.0)
    assert sample.alg_value == pytest.approx(1.0)


def test_pfa_run_single_price_sells_everything():
    prot = worst_case_protection(1.0, 4.0, 0.02)
    one = SearchInstance((4.0,), 1.0, 4.0)
    sample = pfa_run(prot, one)
    assert sample.ratio == pytest.approx(1.0)


def test_pfa_run_hard_instance_matches_schedule_accounting():
    # on a ramp through the grid, profit = sum of level sales plus the
    # compulsory remainder at the floor
    sol = solve_pfa(Pip(1.5, 3.0, 0.5), 1.0, 4.0, 0.2)
    grid = sol.protection.grid
    cum = sol.protection.cumulative
    peak = 3.0
    prices = [v for v in grid.values if v <= peak] + [1.0]
    inst = SearchInstance(tuple(prices), 1.0, 4.0)
    run = pfa_run(sol.protection, inst)
    expected = 0.0
    prev = 0.0
    level = 0.0
    for v, c in zip(grid.values, cum):
        if v <= peak:
            expected += (c - prev) * v
            level = c
        prev = c
    expected += (1.0 - level) * 1.0
    assert run.alg_value == pytest.approx(expected, abs=1e-12)


def test_pfa_run_rejects_out_of_range_and_empty():
    prot = worst_case_protection(1.0, 4.0, 0.02)
    with pytest.raises(DomainError):
        pfa_run(prot, SearchInstance((5.0,), 1.0, 5.0))
    with pytest.raises(DomainError):
        SearchInstance((), 1.0, 4.0)


def test_hard_instance_shape():
    inst = hard_instance(1.0, 1.0, 2)
    assert inst.prices == (1.0, 1.0, 1.0)
    inst = hard_instance(4.0, 1.0, 20)
    assert max(inst.prices) == pytest.approx(4.0)
    assert inst.prices[-1] == 1.0
    assert all(b >= a - 1e-12 for a, b in zip(inst.prices[:-1], inst.prices[1:-1]))


def test_oracle_on_classic_schedule():
    m, M = 1.0, 4.0
    alpha = worst_case_alpha(m, M)
    prot = worst_case_protection(m, M, 0.01)
    oracle = drcr_oracle_search(prot, Pip(m, M, 1.0))
    assert oracle == pytest.approx(alpha, abs=0.01 * M / m + 1e-3)


def test_oracle_on_sell_all_at_floor():
    grid = build_grid(1.0, 4.0, 2.0, 3.0, 0.5)
    prot = ProtectionFunction(grid, tuple([1.0] * len(grid.values)))
    delta = 0.25
    oracle = drcr_oracle_search(prot, Pip(2.0, 3.0, delta))
    expected = (1 - delta) * 3.0 + delta * 4.0  # worst window peak u/m, global M/m
    assert oracle == pytest.approx(expected, abs=1e-9)


def test_oracle_confirms_certificates():
    rng = SplitMix64(8).derive("cert")
    m, M, eps = 1.0, 4.0, 0.05
    for _ in range(5):
        ell = m + rng.uniform() * (M - m)
        u = ell + rng.uniform() * (M - ell)
        pip = Pip(ell, u, round(rng.uniform(), 3))
        sol = solve_pfa(pip, m, M, eps)
        oracle = drcr_oracle_search(sol.protection, pip)
        assert oracle <= sol.drcr + 1e-6
        assert abs(oracle - sol.drcr) <= eps * M / m + 1e-6


def test_arbitrary_instances_dominated_by_hard_instances():
    # the ramp-to-the-peak-then-crash family is extremal: any sequence with
    # the same peak sells each increment at no worse a price
    sol = solve_pfa(Pip(1.5, 3.0, 0.4), 1.0, 4.0, 0.05)
    prot = sol.protection
    rng = SplitMix64(31).derive("instances")
    for _ in range(25):
        n = rng.randint(1, 12)
        prices = tuple(1.0 + rng.uniform() * 3.0 for _ in range(n))
        inst = SearchInstance(prices, 1.0, 4.0)
        peak = max(prices)
        ramp = [v for v in prot.grid.values if v <= peak]
        if not ramp or ramp[-1] < peak:
            ramp.append(peak)
        hard = SearchInstance(tuple(ramp + [1.0]), 1.0, 4.0)
        assert pfa_run(prot, inst).ratio <= pfa_run(prot, hard).ratio + 1e-8


def test_monotone_in_delta_fixed_interval():
    prev = 0.0
    for delta in (0.0, 0.25, 0.5, 0.75, 1.0):
        drcr = solve_pfa(Pip(2.0, 3.0, delta), 1.0, 4.0, 0.05).drcr
        assert drcr >= prev - 1e-7
        prev = drcr


def test_monotone_under_interval_tightening_on_grid():
    # endpoints drawn from the geometric levels keep the grid identical
    # across the chain, so the certified value must be exactly monotone
    eps = 0.05
    g = build_grid(1.0, 4.0, 1.0, 4.0, eps)
    vals = g.values
    chain = [(vals[2], vals[20]), (vals[5], vals[16]), (vals[8], vals[12]), (vals[10], vals[11])]
    prev = math.inf
    for ell, u in chain:
        drcr = solve_pfa(Pip(ell, u, 0.3), 1.0, 4.0, eps).drcr
        assert drcr <= prev + 1e-7
        prev = drcr
