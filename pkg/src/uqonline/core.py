"""Shared domain types: interval predictions, problem instances, ratio samples."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "DomainError",
    "Pip",
    "SkiInstance",
    "SearchInstance",
    "RatioSample",
    "pip_from_point",
    "clamp_pip_to_integer_range",
]


class DomainError(ValueError):
    """A value violates a documented precondition."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)


@dataclass(frozen=True)
class Pip:
    """Interval prediction: with probability >= 1 - delta the critical value
    lies in [lower, upper]."""

    lower: float
    upper: float
    delta: float

    def __post_init__(self) -> None:
        _require(math.isfinite(self.lower) and math.isfinite(self.upper),
                 "interval endpoints must be finite")
        _require(self.lower <= self.upper,
                 f"need lower <= upper, got [{self.lower}, {self.upper}]")
        _require(0.0 <= self.delta <= 1.0,
                 f"delta must be in [0, 1], got {self.delta}")


@dataclass(frozen=True)
class SkiInstance:
    """One ski-rental instance: rent 1/day for `horizon` days or buy at `buy_cost`."""

    horizon: int
    buy_cost: int

    def __post_init__(self) -> None:
        _require(isinstance(self.horizon, int) and self.horizon >= 1,
                 f"horizon must be a positive integer, got {self.horizon}")
        _require(isinstance(self.buy_cost, int) and self.buy_cost >= 1,
                 f"buy_cost must be a positive integer, got {self.buy_cost}")


@dataclass(frozen=True)
class SearchInstance:
    """An online price sequence bounded within [price_floor, price_ceiling]."""

    prices: tuple[float, ...]
    price_floor: float
    price_ceiling: float

    def __post_init__(self) -> None:
        _require(len(self.prices) > 0, "price sequence must be nonempty")
        _require(self.price_floor > 0, "price floor must be positive")
        _require(self.price_ceiling >= self.price_floor,
                 "price ceiling must be >= price floor")
        # small relative slack absorbs float error in geometrically built ramps
        slack = 1e-9 * max(1.0, self.price_ceiling)
        for p in self.prices:
            _require(self.price_floor - slack <= p <= self.price_ceiling + slack,
                     f"price {p} outside [{self.price_floor}, {self.price_ceiling}]")

    @property
    def peak(self) -> float:
        return max(self.prices)


@dataclass(frozen=True)
class RatioSample:
    """Algorithm-vs-offline performance on one instance.

    The producing module fixes the orientation: cost problems use
    alg_value / opt_value, profit problems use opt_value / alg_value.
    """

    alg_value: float
    opt_value: float
    ratio: float

    def __post_init__(self) -> None:
        _require(self.opt_value > 0, "offline value must be positive")


def pip_from_point(prediction: float, error: float, delta: float) -> Pip:
    """Interval prediction centered at a point prediction with symmetric error."""
    _require(error >= 0, f"error must be nonnegative, got {error}")
    _require(0.0 <= delta <= 1.0, f"delta must be in [0, 1], got {delta}")
    return Pip(prediction - error, prediction + error, delta)


def clamp_pip_to_integer_range(pip: Pip, max_value: int) -> Pip:
    """Round the interval outward to integers and clamp into [1, max_value].

    Flooring the lower end and ceiling the upper end never shrinks the
    interval, so the stated coverage probability is preserved.
    """
    _require(max_value >= 1, f"max_value must be >= 1, got {max_value}")
    lo = min(max(math.floor(pip.lower), 1), max_value)
    hi = min(max(math.ceil(pip.upper), 1), max_value)
    return Pip(float(lo), float(hi), pip.delta)
