"""Counter-based pseudo-random streams with explicit (seed, stream) keys.

A stream is a pure function of (seed, stream, counter): output i is the
SplitMix64 finalizer applied to key + i * gamma, where the key is derived
from seed and stream. Identical keys always reproduce identical draws, on
any platform and independent of library versions, which is what makes chain
traces bit-for-bit repeatable. Distinct stream indices give independent
sequences for the same seed, so parallel chains can share one seed.

Distribution sampling is by inversion from single uniforms wherever
possible: a Poisson draw consumes exactly one uniform, a geometric draw
exactly one, an unbiased bounded integer one draw in the common case.
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class RandomStream:
    """One reproducible stream of pseudo-random draws."""

    __slots__ = ("seed", "stream", "_key", "_counter")

    def __init__(self, seed: int, stream: int = 0):
        self.seed = seed & _MASK
        self.stream = stream & _MASK
        base = _mix(self.seed ^ 0xA3EC647659359ACD)
        self._key = _mix(base ^ ((self.stream * _GAMMA) & _MASK))
        self._counter = 0

    @property
    def draws(self) -> int:
        """How many raw 64-bit values have been consumed."""
        return self._counter

    def next_uint64(self) -> int:
        v = _mix((self._key + self._counter * _GAMMA) & _MASK)
        self._counter += 1
        return v

    def uniform(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_uint64() >> 11) * (2.0**-53)

    def below(self, n: int) -> int:
        """Unbiased uniform integer in [0, n)."""
        if n < 1:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_uint64()
            if v < limit:
                return v % n

    def sign(self) -> int:
        """Uniform +1 or -1."""
        return 1 if self.below(2) == 0 else -1

    def poisson(self, mean: float) -> int:
        """Poisson draw by CDF inversion from one uniform."""
        if mean <= 0:
            raise ValueError("mean must be positive")
        u = self.uniform()
        k = 0
        p = math.exp(-mean)
        cdf = p
        limit = max(1024, int(20 * mean))
        while u >= cdf and k < limit:
            k += 1
            p *= mean / k
            cdf += p
        return k

    def poisson_truncated(self, mean: float, bound: int) -> tuple[int, int]:
        """Poisson conditioned on the result being <= bound, by resampling.

        Returns (value, resamples). Draw by draw this consumes exactly what
        plain Poisson sampling does until the first draw above the bound, so
        a truncated chain follows the untruncated chain's path until the
        first truncation event under the same key.
        """
        if bound < 0:
            raise ValueError("bound must be nonnegative")
        resamples = 0
        while True:
            k = self.poisson(mean)
            if k <= bound:
                return k, resamples
            resamples += 1

    def geometric(self, p: float) -> int:
        """Geometric draw on {0, 1, 2, ...} with success probability p."""
        if not 0.0 < p < 1.0:
            raise ValueError("p must be strictly between 0 and 1")
        u = self.uniform()
        return int(math.log1p(-u) // math.log1p(-p))
