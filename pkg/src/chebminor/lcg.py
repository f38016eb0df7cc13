"""Seeded 64-bit linear congruential generator shared by every random draw.

State update  x <- (A*x + C) mod 2^64  with Knuth's MMIX constants; each draw
returns the high 32 bits of the new state.  Bounded integers take two draws
(hi << 32 | lo) and reject values in the final partial block, so the stream
is reproducible in any language with 64-bit unsigned arithmetic.
"""
from __future__ import annotations

A = 6364136223846793005
C = 1442695040888963407
MASK = (1 << 64) - 1


class Lcg64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next32(self) -> int:
        self.state = (A * self.state + C) & MASK
        return self.state >> 32

    def next64(self) -> int:
        return (self.next32() << 32) | self.next32()

    def below(self, bound: int) -> int:
        if bound <= 0:
            raise ValueError("bound must be positive")
        if bound > 1 << 64:
            raise ValueError("bound exceeds 64 bits")
        limit = (1 << 64) - (1 << 64) % bound
        while True:
            v = self.next64()
            if v < limit:
                return v % bound

    def sample(self, population: list, k: int) -> list:
        """k distinct items by partial Fisher-Yates, returned sorted."""
        pool = list(population)
        for i in range(k):
            j = i + self.below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:k])

    @staticmethod
    def describe(seed: int) -> dict:
        return {
            "generator": "lcg64",
            "multiplier": str(A),
            "increment": str(C),
            "modulus": "2^64",
            "output": "high 32 bits of state; bounded draws use two outputs with rejection",
            "seed": str(seed),
        }
