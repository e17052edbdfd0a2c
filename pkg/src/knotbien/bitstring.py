"""Exact finite binary strings and their binary derivatives.

A :class:`BitString` stores its bits packed into a Python ``int`` with the
first (leftmost) bit in the most significant position, plus an explicit
length. Derivatives are therefore a shift, an OR and an XOR on the packed
word, and counting ones is ``int.bit_count``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal

Mode = Literal["linear", "cyclic"]


class BitStringError(ValueError):
    """Raised for malformed bit-string input or out-of-range arguments."""


@dataclass(frozen=True, slots=True)
class BitString:
    value: int
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise BitStringError("bit string must have length >= 1")
        if self.value < 0 or self.value >> self.length:
            raise BitStringError(f"value does not fit in {self.length} bits")

    # -- construction -------------------------------------------------
    @classmethod
    def from_text(cls, text: str) -> "BitString":
        if not text:
            raise BitStringError("empty bit string")
        for pos, ch in enumerate(text, start=1):
            if ch not in "01":
                raise BitStringError(f"illegal character {ch!r} at position {pos}")
        return cls(int(text, 2), len(text))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitString":
        value = 0
        n = 0
        for b in bits:
            if b not in (0, 1):
                raise BitStringError(f"illegal bit {b!r} at position {n + 1}")
            value = (value << 1) | b
            n += 1
        return cls(value, n)

    @classmethod
    def from_bytes(cls, data: bytes, length: int) -> "BitString":
        """Big-endian bytes, MSB first; trailing pad bits of the last byte are dropped."""
        if length < 1 or length > 8 * len(data):
            raise BitStringError(f"length {length} incompatible with {len(data)} bytes")
        if len(data) != (length + 7) // 8:
            raise BitStringError("byte count does not match bit length")
        raw = int.from_bytes(data, "big")
        return cls(raw >> (8 * len(data) - length), length)

    @classmethod
    def from_hex(cls, text: str, length: int | None = None) -> "BitString":
        text = text.strip()
        if text[:2].lower() == "0x":
            text = text[2:]
        if not text:
            raise BitStringError("empty hex string")
        try:
            raw = int(text, 16)
        except ValueError:
            bad = next(i for i, c in enumerate(text, 1) if c not in "0123456789abcdefABCDEF")
            raise BitStringError(f"illegal hex character at position {bad}") from None
        total = 4 * len(text)
        if length is None:
            length = total
        if length < 1 or length > total:
            raise BitStringError(f"bit length {length} out of range for {len(text)} hex digits")
        return cls(raw >> (total - length), length)

    # -- views ----------------------------------------------------------
    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return format(self.value, f"0{self.length}b")

    def __repr__(self) -> str:
        return f"BitString('{self}')"

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.value >> (self.length - 1 - i)) & 1

    def __iter__(self):
        return (self[i] for i in range(self.length))

    def to_bytes(self) -> bytes:
        nbytes = (self.length + 7) // 8
        return (self.value << (8 * nbytes - self.length)).to_bytes(nbytes, "big")

    def ones(self) -> int:
        return self.value.bit_count()

    def ones_fraction(self) -> Fraction:
        return Fraction(self.ones(), self.length)

    @property
    def mask(self) -> int:
        return (1 << self.length) - 1

    def is_all_zeros(self) -> bool:
        return self.value == 0

    def is_all_ones(self) -> bool:
        return self.value == self.mask

    def concat(self, other: "BitString") -> "BitString":
        return BitString((self.value << other.length) | other.value, self.length + other.length)

    # -- transforms -----------------------------------------------------
    def rotate_left(self, k: int = 1) -> "BitString":
        if k < 0:
            raise BitStringError("rotation amount must be >= 0")
        n = self.length
        k %= n
        if k == 0:
            return self
        v = ((self.value << k) & self.mask) | (self.value >> (n - k))
        return BitString(v, n)

    def complement(self) -> "BitString":
        return BitString(self.value ^ self.mask, self.length)

    def reverse(self) -> "BitString":
        return BitString(int(str(self)[::-1], 2), self.length)


def from_text(text: str) -> BitString:
    return BitString.from_text(text)


def _need_two(s: BitString) -> None:
    if s.length < 2:
        raise BitStringError("derivative needs a string of length >= 2")


def linear_derivative(s: BitString) -> BitString:
    """XOR of adjacent pairs; result has length n - 1."""
    _need_two(s)
    n = s.length
    return BitString((s.value ^ (s.value >> 1)) & ((1 << (n - 1)) - 1), n - 1)


def cyclic_derivative(s: BitString) -> BitString:
    """XOR of adjacent pairs including the pair (last, first); length is kept."""
    _need_two(s)
    n = s.length
    v = s.value
    rot = ((v << 1) & s.mask) | (v >> (n - 1))
    return BitString(v ^ rot, n)


def derivative(s: BitString, mode: Mode) -> BitString:
    if mode == "linear":
        return linear_derivative(s)
    if mode == "cyclic":
        return cyclic_derivative(s)
    raise BitStringError(f"unknown derivative mode {mode!r}")


@dataclass(frozen=True)
class DerivativeChain:
    """Levels ``d_0 = s, d_1, ..., d_count`` and their exact ones fractions."""

    mode: Mode
    levels: tuple[BitString, ...]

    @property
    def ones_fractions(self) -> tuple[Fraction, ...]:
        return tuple(level.ones_fraction() for level in self.levels)

    def __len__(self) -> int:
        return len(self.levels)

    def __getitem__(self, k: int) -> BitString:
        return self.levels[k]


def derivative_chain(s: BitString, mode: Mode, count: int | None = None) -> DerivativeChain:
    """Compute ``count`` successive derivatives (default n - 1)."""
    _need_two(s)
    if count is None:
        count = s.length - 1
    if not 1 <= count <= s.length - 1:
        raise BitStringError(f"count must lie in 1..{s.length - 1}, got {count}")
    levels = [s]
    for _ in range(count):
        levels.append(derivative(levels[-1], mode))
    return DerivativeChain(mode, tuple(levels))


def transform(s: BitString, kind: str, k: int = 0) -> BitString:
    if kind == "rotate_left":
        return s.rotate_left(k)
    if kind == "complement":
        return s.complement()
    if kind == "reverse":
        return s.reverse()
    raise BitStringError(f"unknown transform {kind!r}")


def cyclic_period(s: BitString) -> int:
    """Smallest divisor p of n such that rotating by p leaves s unchanged."""
    n = s.length
    for p in range(1, n + 1):
        if n % p == 0 and s.rotate_left(p) == s:
            return p
    return n  # unreachable: p = n always matches


@dataclass(frozen=True)
class ChainClass:
    kind: Literal["all_zeros", "all_ones", "neither"]
    level: int | None

    def __str__(self):
        if self.level is None:
            return self.kind
        return f"{self.kind}@{self.level}"


def classify_chain(s: BitString, mode: Mode) -> ChainClass:
    """First level in 1..n-1 that is all zeros; failing that, the first all-ones level.

    A cyclic chain that hits all ones at level k < n - 1 is all zeros at
    k + 1, so all-ones is only reported when nothing later collapses to zero.
    """
    chain = derivative_chain(s, mode)
    first_ones = None
    for k in range(1, len(chain)):
        level = chain[k]
        if level.is_all_zeros():
            return ChainClass("all_zeros", k)
        if first_ones is None and level.is_all_ones():
            first_ones = k
    if first_ones is not None:
        return ChainClass("all_ones", first_ones)
    return ChainClass("neither", None)
