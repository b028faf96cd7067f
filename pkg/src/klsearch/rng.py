"""Deterministic, seedable random streams.

Every trial of every algorithm draws from its own ``RngStream`` so results
are reproducible bit-for-bit regardless of scheduling.  The generator is
splitmix64: a 64-bit counter advanced by a Weyl increment whose output is
scrambled by two multiply-xorshift rounds.  It is tiny, fast in pure Python,
and has a published reference sequence (see ``tests/test_rng.py``), which
keeps runs identical across platforms without pulling in a dependency.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_TWO53_INV = 2.0 ** -53


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class RngStream:
    """A single-owner splitmix64 stream.

    Streams are cheap value objects; never share one between concurrent
    consumers, derive one stream per trial instead (``derive_stream``).
    """

    __slots__ = ("seed", "_state", "_gauss_spare")

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._state = self.seed
        self._gauss_spare: float | None = None

    def next_u64(self) -> int:
        """Next raw 64-bit output."""
        self._state = (self._state + _GAMMA) & _MASK64
        return _mix64(self._state)

    def uniform_real(self) -> float:
        """Uniform float in [0, 1), 53-bit resolution."""
        return (self.next_u64() >> 11) * _TWO53_INV

    def uniform_bit(self) -> int:
        """0 or 1 with equal probability."""
        return self.next_u64() >> 63

    def uniform_index(self, m: int) -> int:
        """Uniform integer in [0, m).  m must be >= 1."""
        if m < 1:
            raise ValueError(f"uniform_index needs m >= 1, got {m}")
        # rejection sampling keeps the distribution exactly uniform
        limit = ((1 << 64) // m) * m
        r = self.next_u64()
        while r >= limit:
            r = self.next_u64()
        return r % m

    def gauss(self) -> float:
        """Standard normal draw via the Box-Muller transform."""
        if self._gauss_spare is not None:
            z = self._gauss_spare
            self._gauss_spare = None
            return z
        # u1 in (0, 1] so log never sees zero
        u1 = ((self.next_u64() >> 11) + 1) * _TWO53_INV
        u2 = self.uniform_real()
        r = math.sqrt(-2.0 * math.log(u1))
        t = 2.0 * math.pi * u2
        self._gauss_spare = r * math.sin(t)
        return r * math.cos(t)


def derive_stream(master_seed: int, trial_index: int) -> RngStream:
    """Stream for one trial, a pure function of (master_seed, trial_index).

    The trial seed is the (trial_index + 1)-th output of a splitmix64 chain
    seeded with the master seed; the counter construction makes that an O(1)
    jump, so trials may run in any order or in parallel.
    """
    if trial_index < 0:
        raise ValueError(f"trial_index must be non-negative, got {trial_index}")
    seed = _mix64((master_seed + (trial_index + 1) * _GAMMA) & _MASK64)
    return RngStream(seed)
