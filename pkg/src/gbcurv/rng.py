"""Seedable, portable pseudo-random generator for reproducible fixtures.

The bit stream is splitmix64 (Steele, Lea, Flood 2014): 64-bit state advanced
by the golden-ratio increment, output finalized by two xor-shift-multiply
rounds.  The whole suite draws randomness through this generator only, so
fixtures reproduce bit-for-bit from a seed in any language.  The algorithm
identifier recorded in reports is :data:`RNG_ID`.
"""

from __future__ import annotations

__all__ = ["SplitMix64", "RNG_ID"]

RNG_ID = "splitmix64-v1"

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self._state = int(seed) & _MASK

    def next_u64(self):
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self, low=0.0, high=1.0):
        """Float in [low, high) with 53 random mantissa bits."""
        x = (self.next_u64() >> 11) * 2.0 ** -53
        return low + (high - low) * x

    def randint(self, low, high):
        """Integer in [low, high], inclusive, via u64 modulo (portable; the
        modulo bias is irrelevant for fixture generation)."""
        span = int(high) - int(low) + 1
        return int(low) + self.next_u64() % span

    def sign(self):
        return 1 if self.next_u64() & 1 else -1
