"""Bit-string genotypes and their linear decoding to real coefficients.

A solution for an n-coefficient function is a string of n*l bits; each l-bit
group is an unsigned code mapped linearly onto [lower, upper].  Flipping a
single bit is the elementary move, so a genotype has exactly n*l neighbors.
Groups may optionally be reflected-Gray coded, in which case a group is
Gray-decoded to a plain binary code before the linear mapping.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rng import RngStream

CODINGS = ("binary", "gray")


@dataclass(frozen=True)
class EncodingSpec:
    """Shape and bounds of a bit-string encoding."""

    n: int
    l: int
    lower: float
    upper: float
    coding: str = "binary"

    def __post_init__(self):
        if self.n < 1 or self.l < 1:
            raise ValueError(f"need n >= 1 and l >= 1, got n={self.n}, l={self.l}")
        if not self.lower < self.upper:
            raise ValueError(f"need lower < upper, got [{self.lower}, {self.upper}]")
        if self.coding not in CODINGS:
            raise ValueError(f"coding must be one of {CODINGS}, got {self.coding!r}")

    @property
    def total_bits(self) -> int:
        return self.n * self.l

    @property
    def max_code(self) -> int:
        return (1 << self.l) - 1

    @property
    def step(self) -> float:
        """Real-value increment per unit of code."""
        return (self.upper - self.lower) / self.max_code


def binary_to_gray(code: int) -> int:
    """Reflected Gray code of a plain binary code."""
    return code ^ (code >> 1)


def gray_to_binary(code: int) -> int:
    """Inverse of ``binary_to_gray``."""
    mask = code >> 1
    while mask:
        code ^= mask
        mask >>= 1
    return code


def decode_coefficient(code: int, spec: EncodingSpec) -> float:
    """Linear mapping of an l-bit unsigned code onto [lower, upper].

    code 0 maps exactly to the lower bound, code 2**l - 1 exactly to the
    upper bound, and the mapping is strictly increasing in between.
    """
    return spec.lower + code * spec.step


@dataclass(frozen=True)
class BitVector:
    """An n*l-bit genotype stored as n unsigned l-bit group codes.

    Bit j of the string lives in group j // l; within a group, bit 0 is the
    most significant bit of the code.
    """

    groups: tuple[int, ...]
    l: int

    @property
    def total_bits(self) -> int:
        return len(self.groups) * self.l

    def get(self, j: int) -> int:
        g, b = divmod(self._check(j), self.l)
        return (self.groups[g] >> (self.l - 1 - b)) & 1

    def flip(self, j: int) -> "BitVector":
        """Copy of self with bit j inverted."""
        g, b = divmod(self._check(j), self.l)
        groups = list(self.groups)
        groups[g] ^= 1 << (self.l - 1 - b)
        return BitVector(tuple(groups), self.l)

    def bits(self) -> list[int]:
        return [self.get(j) for j in range(self.total_bits)]

    def hamming(self, other: "BitVector") -> int:
        if other.l != self.l or len(other.groups) != len(self.groups):
            raise ValueError("bit vectors have different shapes")
        return sum(
            (a ^ b).bit_count() for a, b in zip(self.groups, other.groups)
        )

    def to_hex(self) -> str:
        """Whole bit string as hex, most significant bit first.

        When total_bits is not a multiple of four the string is padded with
        zero bits on the right before conversion.
        """
        value = 0
        for g in self.groups:
            value = (value << self.l) | g
        pad = -self.total_bits % 4
        return format(value << pad, f"0{(self.total_bits + pad) // 4}x")

    @classmethod
    def from_hex(cls, s: str, spec: EncodingSpec) -> "BitVector":
        pad = -spec.total_bits % 4
        value = int(s, 16) >> pad
        mask = spec.max_code
        groups = [
            (value >> (spec.l * (spec.n - 1 - i))) & mask for i in range(spec.n)
        ]
        return cls(tuple(groups), spec.l)

    @classmethod
    def random(cls, spec: EncodingSpec, rng: RngStream) -> "BitVector":
        """Every bit 0 or 1 with equal probability."""
        return cls(
            tuple(rng.uniform_index(1 << spec.l) for _ in range(spec.n)), spec.l
        )

    def _check(self, j: int) -> int:
        if not 0 <= j < self.total_bits:
            raise IndexError(f"bit index {j} out of range [0, {self.total_bits})")
        return j


@dataclass(frozen=True)
class Move:
    """One elementary perturbation.

    ``bit_flip`` inverts bit ``index`` of a bit genotype; ``int_step`` adds
    ``direction`` (+1 or -1) to coefficient ``index`` of an integer-vector
    state (used by the integer search variant only).
    """

    kind: str
    index: int
    direction: int = 0


def bit_flip(j: int) -> Move:
    return Move("bit_flip", j)


def int_step(i: int, direction: int) -> Move:
    if direction not in (-1, 1):
        raise ValueError(f"direction must be +1 or -1, got {direction}")
    return Move("int_step", i, direction)


def decode_solution(bv: BitVector, spec: EncodingSpec) -> list[float]:
    """Real coefficient vector encoded by ``bv``.

    Coefficient i comes from bits [i*l, (i+1)*l); Gray-coded groups are
    converted to binary before the linear mapping.
    """
    if bv.l != spec.l or len(bv.groups) != spec.n:
        raise ValueError(
            f"genotype shape {len(bv.groups)}x{bv.l} does not match "
            f"spec {spec.n}x{spec.l}"
        )
    if spec.coding == "gray":
        return [decode_coefficient(gray_to_binary(g), spec) for g in bv.groups]
    return [decode_coefficient(g, spec) for g in bv.groups]


def apply_move(bv: BitVector, move: Move) -> BitVector:
    """Genotype after one bit flip; applying the same move twice is identity."""
    if move.kind != "bit_flip":
        raise TypeError(f"apply_move on a bit genotype needs a bit_flip, got {move.kind}")
    return bv.flip(move.index)


def gain(bv: BitVector, move: Move, objective, spec: EncodingSpec, rng=None) -> float:
    """Cost decrease of a move: f(current) - f(neighbor).

    Positive means the move is downhill.  For a stochastic objective each of
    the two evaluations draws fresh noise from ``rng``; with ``rng=None``
    both evaluations are noise-free.
    """
    before = objective.evaluate(decode_solution(bv, spec), rng)
    after = objective.evaluate(decode_solution(apply_move(bv, move), spec), rng)
    return before - after
