"""Deterministic 64-bit random streams.

The generator is SplitMix64: the state advances by the golden-gamma
constant ``0x9E3779B97F4A7C15`` and every output is the finalizer

    z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
    z ^= z >> 27;  z *= 0x94D049BB133111EB
    z ^= z >> 31

applied to the fresh state, all arithmetic mod 2**64.  Sub-stream seeds
hash a text label with 64-bit FNV-1a, starting from the FNV offset basis
xor-ed with the finalized parent seed, and finalize once more.  Both
recipes are frozen so a catalogue is byte-identical across runs, machines
and reimplementations in other languages.
"""

from __future__ import annotations

from typing import Iterable, MutableSequence

MASK64 = (1 << 64) - 1

_GAMMA = 0x9E3779B97F4A7C15
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def mix64(z: int) -> int:
    """SplitMix64 output finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, label: str) -> int:
    """Derive a sub-stream seed from a parent seed and a text label."""
    h = _FNV_OFFSET ^ mix64(master)
    for byte in label.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & MASK64
    return mix64(h)


class RandomStream:
    """SplitMix64 stream with the sampling helpers the generator needs."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & MASK64
        return mix64(self._state)

    def random(self) -> float:
        """Float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * 2.0**-53

    def below(self, n: int) -> int:
        """Unbiased integer in [0, n) via rejection sampling."""
        if n <= 0:
            raise ValueError(f"below() needs n >= 1, got {n}")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def choose_distinct(self, n: int, k: int, exclude: Iterable[int] = ()) -> list[int]:
        """k distinct values from 1..n avoiding `exclude`, in draw order.

        Sparse Fisher-Yates over the complement of `exclude`; uniform over
        k-permutations without materialising the pool.
        """
        excl = sorted(set(exclude))
        m = n - len(excl)
        if k > m:
            raise ValueError(f"cannot draw {k} distinct values from pool of {m}")
        swapped: dict[int, int] = {}
        out = []
        for i in range(k):
            j = i + self.below(m - i)
            value_at_j = swapped.get(j, j)
            swapped[j] = swapped.get(i, i)
            # map the 0-based complement index to a 1-based pool value
            val = value_at_j + 1
            for e in excl:
                if e <= val:
                    val += 1
                else:
                    break
            out.append(val)
        return out

    def shuffle(self, items: MutableSequence) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
