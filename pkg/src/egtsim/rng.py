"""Deterministic random source: splitmix64 streams with derived per-task seeds.

All randomness in the library flows through this module so that results are
bit-reproducible from a single 64-bit master seed, independent of execution
order or worker count.  Parallel work units (Monte Carlo trials, tournament
matches) each get their own stream, keyed by the master seed and the unit's
index, so trial k produces the same draws whether it runs first, last, or on
another thread.

The compiled kernel backend re-implements the same integer arithmetic in C;
the two backends produce bit-identical streams.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF

_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_DERIVE_SALT = 0x6A09E667F3BCC909


def mix64(z: int) -> int:
    """splitmix64 finalizer: a bijective 64-bit scramble."""
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, *path: int) -> int:
    """Derive an independent stream seed from a master seed and an index path.

    Distinct paths give distinct seeds (the per-level update is injective and
    mix64 is bijective), so per-trial and per-match streams never collide.
    """
    s = mix64((master & MASK64) ^ _DERIVE_SALT)
    for p in path:
        s = mix64((s + _GOLDEN * (p + 1)) & MASK64)
    return s


class SplitMix64:
    """Minimal counter-based 64-bit generator (splitmix64).

    Small state, cheap to fork via derive_seed, and trivially portable:
    the pure-Python, numpy, and C implementations agree bit for bit.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & MASK64
        return mix64(self._state)

    def random(self) -> float:
        """Uniform double in [0, 1): 53 high bits of the next output."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform_pos(self) -> float:
        """Uniform double in (0, 1]; safe as a log() argument."""
        return 1.0 - self.random()

    def coin(self) -> int:
        """Fair coin: 0 or 1 from the top bit of the next output."""
        return self.next_u64() >> 63
