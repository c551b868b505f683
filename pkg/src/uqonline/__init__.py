"""Robust online decision policies from probabilistic interval predictions.

A prediction says the critical value of an online instance (ski-rental
horizon, peak price) lies in [lower, upper] with probability at least
1 - delta.  This package computes policies minimizing the worst expected
competitive ratio consistent with that claim, executes them, learns to beat
them across instance streams, and reproduces the multi-instance comparison
experiment.
"""

__version__ = "0.1.0"

from .core import (
    DomainError,
    Pip,
    RatioSample,
    SearchInstance,
    SkiInstance,
    clamp_pip_to_integer_range,
    pip_from_point,
)
from .lp import LinearProgram, LpError, LpSolution, LpStatus, SolverOptions, solve
from .ski_rental import (
    DrcrSolution,
    PurchaseDistribution,
    SolverFailure,
    build_rsr_lp,
    chi,
    continuous_drcr_oracle,
    drcr_oracle,
    dsr_buy_day,
    dsr_drcr,
    dsr_pip_buy_day,
    dsr_pip_drcr,
    expected_cost,
    ftp_buy_day,
    la_purohit_buy_day,
    meta_lambda,
    solve_rsr,
    woa_distribution,
    zeta,
)
from .online_search import (
    PriceGrid,
    ProtectionFunction,
    SearchDrcrSolution,
    build_grid,
    drcr_oracle_search,
    hard_instance,
    pfa_run,
    solve_pfa,
    worst_case_alpha,
    worst_case_protection,
)
from .online_learning import (
    DynamicSearchLearner,
    DynamicSkiLearner,
    EgLearner,
    EpsilonNet,
    RoundLog,
    StaticSkiLearner,
    eg_decide,
    eg_init,
    eg_update,
    net_lookup_or_insert,
    ol_dynamic_search_round,
    ol_dynamic_ski_round,
    ol_static_round,
    policy_regret,
)
