"""Portable seeded generator for reproducible instances.

xorshift64* (Vigna, 2016), seeded through one splitmix64 step.  Every
operation is integer arithmetic modulo 2**64 plus IEEE double conversions,
so a port to any language reproduces the stream exactly:

    state  = splitmix64(seed)              (0 is replaced by 0x9E3779B97F4A7C15)
    x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27      (all mod 2**64)
    output = x * 0x2545F4914F6CDD1D                   (mod 2**64)
    random = (output >> 11) * 2**-53                  in [0, 1)

Normals use the Box-Muller cosine branch with u1 = 1 - random().
"""

from __future__ import annotations

import math

MASK = (1 << 64) - 1
MULT = 0x2545F4914F6CDD1D
GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    z = (x + GOLDEN) & MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class XorShift64Star:
    def __init__(self, seed: int = 0):
        self.state = splitmix64(int(seed) & MASK) or GOLDEN

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK
        x ^= x >> 27
        self.state = x
        return (x * MULT) & MASK

    def random(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        return lo + (hi - lo) * self.random()

    def normal(self) -> float:
        u1 = 1.0 - self.random()
        u2 = self.random()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def randint(self, lo: int, hi: int) -> int:
        """Integer in [lo, hi] inclusive."""
        return lo + self.next_u64() % (hi - lo + 1)

    def sample(self, population, k: int) -> list:
        """k distinct elements, via a partial Fisher-Yates shuffle."""
        pool = list(population)
        for i in range(k):
            j = self.randint(i, len(pool) - 1)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
