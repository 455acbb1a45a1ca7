"""Seeded uniform streams and running ratio statistics.

Randomness here is counter based: every draw is a pure function of
(seed, stream_id, counter).  A sweep cell can therefore be computed on any
worker process, in any order, and still produce exactly the bytes a serial
run would produce.  Streams never share draws because the stream id is mixed
into the base state through an avalanche finalizer before any counting
starts.

Draws lie in the half-open interval (0, 1].  The raw 53-bit word is shifted
up by one lattice step, so a transform that divides by the draw (the heavy
tail sampler below, the Box-Muller log) is always safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

_MASK64 = (1 << 64) - 1
_WEYL = 0x9E3779B97F4A7C15
_STREAM_SALT = 0xD1B54A32D192ED03
_INV_2_53 = 2.0 ** -53


def _finalize(z: int) -> int:
    """64-bit avalanche finalizer (the SplitMix64 output stage)."""
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def stream_base(seed: int, stream_id: int) -> int:
    """Collapse (seed, stream_id) into the 64-bit base state of one stream."""
    h = _finalize(((seed & _MASK64) + _WEYL) & _MASK64)
    h ^= _finalize(((stream_id & _MASK64) + _STREAM_SALT) & _MASK64)
    return _finalize((h + _WEYL) & _MASK64)


def unit_draw(base: int, counter: int) -> float:
    """Uniform draw in (0, 1] at position ``counter`` of the stream."""
    z = _finalize((base + counter * _WEYL) & _MASK64)
    return ((z >> 11) + 1) * _INV_2_53


def sample_pareto_tail(u: float) -> float:
    """Map a uniform draw to the heavy-tailed perturbation multiplier.

    The tail law is Pr(value >= t) = 1 / (1 + t)^2 for t >= 0, sampled by
    inverting the survival function: value = 1/sqrt(u) - 1.  The mean is 1
    and the variance diverges, so smoothed predictions keep a unit-scale
    typical error while still producing arbitrarily large overshoots.
    """
    if not 0.0 < u <= 1.0:
        raise ValueError(f"uniform draw must lie in (0, 1], got {u!r}")
    return 1.0 / math.sqrt(u) - 1.0


@dataclass
class SeededStream:
    """One independent uniform stream identified by (seed, stream_id)."""

    seed: int
    stream_id: int = 0
    _base: int = field(init=False, repr=False)
    _counter: int = field(default=0, init=False, repr=False)

    def __post_init__(self) -> None:
        self._base = stream_base(self.seed, self.stream_id)

    def uniform_draw(self) -> float:
        """Next uniform draw in (0, 1]; advances the counter."""
        u = unit_draw(self._base, self._counter)
        self._counter += 1
        return u

    def draw_at(self, counter: int) -> float:
        """Random access to any position without disturbing the counter."""
        return unit_draw(self._base, counter)

    def split(self, stream_id: int) -> "SeededStream":
        """A fresh independent stream under the same seed."""
        return SeededStream(self.seed, stream_id)


@dataclass
class RatioStats:
    """Running mean and spread of performance ratios (Welford form).

    ``m2`` is the sum of squared deviations from the running mean.  The
    merge operation combines two accumulators as if their samples had been
    fed to a single one, which is what lets sweep cells run on worker
    processes and still report exact statistics.
    """

    n: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def accumulate(self, value: float) -> "RatioStats":
        self.n += 1
        delta = value - self.mean
        self.mean += delta / self.n
        self.m2 += delta * (value - self.mean)
        return self

    @property
    def se(self) -> float | None:
        """Standard error of the mean, or None when n < 2 leaves it undefined."""
        if self.n < 2:
            return None
        return math.sqrt(self.m2 / (self.n * (self.n - 1.0)))

    def merge(self, other: "RatioStats") -> "RatioStats":
        """Combine two accumulators; associative up to float rounding."""
        n = self.n + other.n
        if n == 0:
            return RatioStats()
        delta = other.mean - self.mean
        weight = other.n / n
        mean = self.mean + delta * weight
        m2 = self.m2 + other.m2 + delta * delta * self.n * weight
        return RatioStats(n=n, mean=mean, m2=m2)

    @classmethod
    def from_moments(cls, n: int, mean: float, m2: float) -> "RatioStats":
        return cls(n=n, mean=mean, m2=m2)
