"""Portable pseudo-random generator used for corpus splits and bootstrap resampling.

The generator is a 64-bit linear congruential generator with Knuth's MMIX
constants, specified completely here so that any implementation can reproduce
the same splits and resamples:

    state_0     = seed mod 2**64
    state_{k+1} = (6364136223846793005 * state_k + 1442695040888963407) mod 2**64
    output_k    = state_{k+1} >> 32                  (a 32-bit value)

``below(k)`` maps one output onto ``[0, k)`` by multiply-shift,
``(output * k) >> 32``. ``shuffle`` is Fisher-Yates running ``i`` from
``n - 1`` down to ``1`` and swapping position ``i`` with ``below(i + 1)``.
``below`` requires ``k <= 2**32``.
"""
from __future__ import annotations

from typing import MutableSequence

MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407
MASK64 = (1 << 64) - 1


class Lcg64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u32(self) -> int:
        self.state = (MULTIPLIER * self.state + INCREMENT) & MASK64
        return self.state >> 32

    def below(self, k: int) -> int:
        if not 0 < k <= 1 << 32:
            raise ValueError(f"bound must be in [1, 2**32], got {k}")
        return (self.next_u32() * k) >> 32

    def shuffle(self, items: MutableSequence) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def indices(self, n: int, size: int) -> list[int]:
        """``size`` draws from ``[0, n)`` with replacement."""
        return [self.below(n) for _ in range(size)]
