"""Experiment configuration: flat key = value files with CLI-style overrides."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

__all__ = ["ConfigError", "ExperimentConfig", "parse_config", "load_config",
           "ALGORITHMS", "DEFAULT_ALGORITHMS"]

ALGORITHMS = ("WOA", "FTP", "RSR-PIP", "OL-Dynamic", "OL-Static", "DSR-PIP")
DEFAULT_ALGORITHMS = ("WOA", "FTP", "RSR-PIP", "OL-Dynamic", "OL-Static")


class ConfigError(ValueError):
    """Invalid configuration file or overrides."""


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str = "ski-rental"
    T: int = 3000
    runs: int = 10
    seed: int = 7
    B: int = 2
    horizon_max: int = 8
    day_support: tuple[int, int] = (1, 8)
    sigma_pattern: tuple[tuple[int, float], ...] = ((10, 0.0), (10, 6.0))
    confidence: float = 0.90
    algorithms: tuple[str, ...] = DEFAULT_ALGORITHMS
    m: float = 1.0
    M: float = 4.0
    grid_eps: float = 0.01
    ftp_literal: bool = False

    def validate(self) -> "ExperimentConfig":
        if self.problem not in ("ski-rental", "online-search"):
            raise ConfigError(f"unknown problem {self.problem!r}")
        if self.T < 1:
            raise ConfigError(f"T must be >= 1, got {self.T}")
        if self.runs < 1:
            raise ConfigError(f"runs must be >= 1, got {self.runs}")
        if self.B < 1:
            raise ConfigError(f"B must be >= 1, got {self.B}")
        if self.horizon_max < 1:
            raise ConfigError("horizon_max must be >= 1")
        lo, hi = self.day_support
        if not 1 <= lo <= hi <= self.horizon_max:
            raise ConfigError(
                f"day_support [{lo}, {hi}] must sit within [1, {self.horizon_max}]"
            )
        if not 0.0 < self.confidence < 1.0:
            raise ConfigError("confidence must be in (0, 1)")
        if not self.sigma_pattern:
            raise ConfigError("sigma_pattern must be nonempty")
        for length, sigma in self.sigma_pattern:
            if length < 1 or sigma < 0:
                raise ConfigError(f"bad sigma_pattern entry ({length}, {sigma})")
        if not self.algorithms:
            raise ConfigError("at least one algorithm required")
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ConfigError(
                    f"unknown algorithm {name!r}; choices: {', '.join(ALGORITHMS)}"
                )
        if not 0 < self.m <= self.M:
            raise ConfigError("need 0 < m <= M")
        if self.grid_eps <= 0:
            raise ConfigError("grid_eps must be positive")
        return self

    @property
    def delta(self) -> float:
        """Per-round distrust level: one minus the interval coverage."""
        return 1.0 - self.confidence


def _parse_day_support(text: str) -> tuple[int, int]:
    sep = ".." if ".." in text else "-"
    parts = text.split(sep)
    if len(parts) != 2:
        raise ConfigError(f"day_support must look like '1..8', got {text!r}")
    return int(parts[0]), int(parts[1])


def _parse_sigma_pattern(text: str) -> tuple[tuple[int, float], ...]:
    out = []
    for chunk in text.split(","):
        if ":" not in chunk:
            raise ConfigError(f"sigma_pattern entries look like '10:0', got {chunk!r}")
        length, sigma = chunk.split(":", 1)
        out.append((int(length), float(sigma)))
    return tuple(out)


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


_PARSERS = {
    "problem": str,
    "T": int,
    "runs": int,
    "seed": int,
    "B": int,
    "horizon_max": int,
    "day_support": _parse_day_support,
    "sigma_pattern": _parse_sigma_pattern,
    "confidence": float,
    "algorithms": lambda s: tuple(a.strip() for a in s.split(",") if a.strip()),
    "m": float,
    "M": float,
    "grid_eps": float,
    "ftp_literal": _parse_bool,
}


def parse_config(text: str, overrides: Optional[dict[str, str]] = None) -> ExperimentConfig:
    """Parse `key = value` lines ('#' starts a comment), then apply overrides
    with the same key names."""
    values: dict[str, object] = {}

    def assign(key: str, raw: str, where: str) -> None:
        key = key.strip()
        if key not in _PARSERS:
            raise ConfigError(f"unknown config key {key!r} ({where})")
        try:
            values[key] = _PARSERS[key](raw.strip())
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r} ({where}): {exc}") from exc

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, raw = stripped.split("=", 1)
        assign(key, raw, f"line {lineno}")

    for key, raw in (overrides or {}).items():
        assign(key, raw, "override")

    return ExperimentConfig(**values).validate()  # type: ignore[arg-type]


def load_config(path: str, overrides: Optional[dict[str, str]] = None) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read(), overrides)
