"""Experiment harness: configuration, seeded streams, runs, charts."""

from .config import ALGORITHMS, ConfigError, DEFAULT_ALGORITHMS, ExperimentConfig, load_config, parse_config
from .rng import SplitMix64, fnv1a64, normal_cdf, normal_quantile
from .streams import SkiRound, generate_ski_stream
from .experiment import (
    RECORD_COLUMNS,
    SUMMARY_CHECKPOINTS,
    ExperimentRecord,
    RsrCache,
    RunArtifacts,
    run_experiment,
)
from .charts import ChartError, emit_chart

__all__ = [
    "ALGORITHMS",
    "DEFAULT_ALGORITHMS",
    "ConfigError",
    "ExperimentConfig",
    "parse_config",
    "load_config",
    "SplitMix64",
    "fnv1a64",
    "normal_cdf",
    "normal_quantile",
    "SkiRound",
    "generate_ski_stream",
    "ExperimentRecord",
    "RsrCache",
    "RunArtifacts",
    "run_experiment",
    "RECORD_COLUMNS",
    "SUMMARY_CHECKPOINTS",
    "ChartError",
    "emit_chart",
]
