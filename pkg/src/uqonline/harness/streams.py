"""Seeded synthetic prediction/instance streams.

Each round draws a true horizon uniformly from the configured day range,
perturbs it with round-dependent noise (the sigma pattern alternates good
and bad predictors), and reports the symmetric confidence interval around
the noisy point, clamped outward onto integer days.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import Pip, SkiInstance, clamp_pip_to_integer_range, pip_from_point
from .config import ExperimentConfig
from .rng import SplitMix64, normal_quantile

__all__ = ["SkiRound", "generate_ski_stream"]


@dataclass(frozen=True)
class SkiRound:
    t: int
    pip: Pip
    instance: SkiInstance
    point_prediction: float   # the raw noisy point, before interval clamping
    sigma: float


def _sigma_schedule(pattern: tuple[tuple[int, float], ...], T: int) -> list[float]:
    out: list[float] = []
    while len(out) < T:
        for length, sigma in pattern:
            out.extend([sigma] * length)
            if len(out) >= T:
                break
    return out[:T]


def generate_ski_stream(config: ExperimentConfig, run_seed: int) -> list[SkiRound]:
    """Deterministic stream for one run: same (config, run_seed) in, same
    rounds out, byte for byte."""
    rng = SplitMix64(run_seed).derive("ski-stream")
    z = normal_quantile(0.5 * (1.0 + config.confidence))
    delta = config.delta
    sigmas = _sigma_schedule(config.sigma_pattern, config.T)
    lo, hi = config.day_support

    rounds: list[SkiRound] = []
    for t in range(1, config.T + 1):
        n = rng.randint(lo, hi)
        sigma = sigmas[t - 1]
        p = n + sigma * rng.normal()
        raw = pip_from_point(p, z * sigma, delta)
        pip = clamp_pip_to_integer_range(raw, config.horizon_max)
        rounds.append(SkiRound(t, pip, SkiInstance(n, config.B), p, sigma))
    return rounds
