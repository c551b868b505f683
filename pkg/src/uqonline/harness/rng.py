"""Self-contained pseudo-randomness so streams replay bit-for-bit anywhere.

The generator is SplitMix64 (Steele, Lea & Flood's constants), driven purely
by 64-bit integer arithmetic; uniforms take the top 53 bits.  Normals come
from Box-Muller using the cosine branch only, consuming exactly two uniforms
per draw.  The standard-normal quantile is a bisection on the CDF via
math.erf rather than any platform-dependent library routine.
"""

from __future__ import annotations

import math

__all__ = ["SplitMix64", "normal_cdf", "normal_quantile", "fnv1a64"]

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * _MIX1 & _MASK
    z = (z ^ (z >> 27)) * _MIX2 & _MASK
    return z ^ (z >> 31)


def fnv1a64(text: str) -> int:
    """FNV-1a hash; stable across processes, unlike builtin hash()."""
    h = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & _MASK
    return h


class SplitMix64:
    def __init__(self, seed: int) -> None:
        self.seed = seed & _MASK
        self._state = seed & _MASK

    def next_uint64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _mix(self._state)

    def uniform(self) -> float:
        """Uniform in [0, 1) with 53-bit resolution."""
        return (self.next_uint64() >> 11) * (2.0 ** -53)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + int(self.uniform() * (hi - lo + 1))

    def normal(self, mu: float = 0.0, sigma: float = 1.0) -> float:
        u1 = 1.0 - self.uniform()  # avoid log(0)
        u2 = self.uniform()
        z = math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
        return mu + sigma * z

    def derive(self, tag: str) -> "SplitMix64":
        """Independent child stream determined by this seed and the tag."""
        return SplitMix64(_mix(self.seed ^ fnv1a64(tag)))


def normal_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def normal_quantile(p: float, tol: float = 1e-12) -> float:
    """Inverse standard-normal CDF by bisection on [-40, 40]."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile level must be in (0, 1), got {p}")
    lo, hi = -40.0, 40.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if normal_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
