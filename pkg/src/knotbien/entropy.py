"""Shannon entropy and the weighted BiEntropy family.

Four weightings of the entropies of a string and its first n - 2 binary
derivatives are supported:

=============  ==================  ===========================
scheme         weight of level k   alias (linear / knot mode)
=============  ==================  ===========================
power_of_two   2**k                bien / kbien
logarithmic    log2(k + 2)         tbien / ktbien
linear         k + 1               lbien / klbien
zero           1 if k == 0 else 0  pbien / kpbien (plain Shannon)
=============  ==================  ===========================

Knot mode uses cyclic derivatives, so every level keeps length n and the
result is invariant under rotation of the input.

Power-of-two weights are stored scaled by ``2**-(n-2)`` so long strings do
not overflow. The ratio is unchanged, but for n beyond roughly 1000 the
early weights underflow to zero, and already for n > 64 the value is
essentially decided by the last few derivatives.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

from .bitstring import BitString, BitStringError

Mode = Literal["linear", "knot"]
Scheme = Literal["power_of_two", "logarithmic", "linear", "zero"]

SCHEMES: tuple[str, ...] = ("power_of_two", "logarithmic", "linear", "zero")
MODES: tuple[str, ...] = ("linear", "knot")

# measure name -> (mode, scheme)
MEASURES: dict[str, tuple[str, str]] = {
    "bien": ("linear", "power_of_two"),
    "tbien": ("linear", "logarithmic"),
    "lbien": ("linear", "linear"),
    "pbien": ("linear", "zero"),
    "kbien": ("knot", "power_of_two"),
    "ktbien": ("knot", "logarithmic"),
    "klbien": ("knot", "linear"),
    "kpbien": ("knot", "zero"),
}

# short scheme names as used on the command line
SCHEME_ALIASES: dict[str, str] = {
    "bien": "power_of_two",
    "tbien": "logarithmic",
    "lbien": "linear",
    "pbien": "zero",
}


def shannon(p: float | Fraction) -> float:
    """Binary entropy in bits, with 0 * log2(0) taken as 0."""
    if not 0 <= p <= 1:
        raise ValueError(f"probability {p!r} outside [0, 1]")
    if p == 0 or p == 1:
        return 0.0
    if isinstance(p, Fraction):
        # exact complement keeps H(p) and H(1 - p) bit-identical
        p, q = float(min(p, 1 - p)), float(max(p, 1 - p))
    else:
        p = float(p)
        q = 1.0 - p
    return -p * math.log2(p) - q * math.log2(q)


@lru_cache(maxsize=4096)
def _entropy_table(length: int) -> tuple[float, ...]:
    # H(ones / length) for every possible ones count; fraction is exact before conversion
    return tuple(shannon(Fraction(c, length)) for c in range(length + 1))


@lru_cache(maxsize=1024)
def weights(scheme: str, n: int) -> tuple[float, ...]:
    """Weights for levels 0..n-2 of a string of length n."""
    if n < 2:
        raise BitStringError("BiEntropy needs a string of length >= 2")
    top = n - 2
    if scheme == "power_of_two":
        return tuple(math.ldexp(1.0, k - top) for k in range(n - 1))
    if scheme == "logarithmic":
        return tuple(math.log2(k + 2) for k in range(n - 1))
    if scheme == "linear":
        return tuple(float(k + 1) for k in range(n - 1))
    if scheme == "zero":
        return (1.0,) + (0.0,) * (n - 2)
    raise ValueError(f"unknown weight scheme {scheme!r}")


@lru_cache(maxsize=1024)
def normalizer(scheme: str, n: int) -> float:
    return math.fsum(weights(scheme, n))


@dataclass(frozen=True)
class WeightScheme:
    kind: str

    def __post_init__(self):
        if self.kind not in SCHEMES:
            raise ValueError(f"unknown weight scheme {self.kind!r}")

    def weights(self, n: int) -> tuple[float, ...]:
        return weights(self.kind, n)

    def normalizer(self, n: int) -> float:
        return normalizer(self.kind, n)


@dataclass(frozen=True)
class LevelTerm:
    k: int
    level: BitString
    p: Fraction
    entropy: float
    weight: float

    @property
    def weighted(self) -> float:
        return self.entropy * self.weight


@dataclass(frozen=True)
class BiEntropyResult:
    value: float
    mode: str
    scheme: str
    per_level: tuple[LevelTerm, ...]
    final_level: BitString  # d_{n-1}: computed, never weighted

    @property
    def weight_sum(self) -> float:
        return math.fsum(t.weight for t in self.per_level)

    @property
    def weighted_sum(self) -> float:
        return math.fsum(t.weighted for t in self.per_level)


def _check(mode: str, scheme: str, n: int) -> None:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if scheme not in SCHEMES:
        raise ValueError(f"unknown weight scheme {scheme!r}")
    if n < 2:
        raise BitStringError("BiEntropy needs a string of length >= 2")


def bientropy(s: BitString, mode: str = "knot", scheme: str = "logarithmic") -> BiEntropyResult:
    """Full BiEntropy evaluation with the per-level trace."""
    if isinstance(scheme, WeightScheme):
        scheme = scheme.kind
    n = s.length
    _check(mode, scheme, n)
    ws = weights(scheme, n)
    terms = []
    level = s
    for k in range(n - 1):
        p = level.ones_fraction()
        terms.append(LevelTerm(k, level, p, _entropy_table(level.length)[level.ones()], ws[k]))
        level = _step(level, mode)
    value = math.fsum(t.weighted for t in terms) / normalizer(scheme, n)
    return BiEntropyResult(value, mode, scheme, tuple(terms), level)


def _step(level: BitString, mode: str) -> BitString:
    n = level.length
    v = level.value
    if mode == "knot":
        return BitString(v ^ (((v << 1) & level.mask) | (v >> (n - 1))), n)
    return BitString((v ^ (v >> 1)) & ((1 << (n - 1)) - 1), n - 1)


def bientropy_value(s: BitString, mode: str = "knot", scheme: str = "logarithmic") -> float:
    """Same number as :func:`bientropy` without building the trace."""
    n = s.length
    _check(mode, scheme, n)
    ws = weights(scheme, n)
    v = s.value
    terms = []
    if mode == "knot":
        mask = (1 << n) - 1
        table = _entropy_table(n)
        shift = n - 1
        for k in range(n - 1):
            if v == 0:
                break  # every later level is zero as well
            terms.append(table[v.bit_count()] * ws[k])
            v ^= ((v << 1) & mask) | (v >> shift)
    else:
        length = n
        for k in range(n - 1):
            if v == 0:
                break
            terms.append(_entropy_table(length)[v.bit_count()] * ws[k])
            length -= 1
            v = (v ^ (v >> 1)) & ((1 << length) - 1)
    return math.fsum(terms) / normalizer(scheme, n)


def measure(s: BitString, name: str = "ktbien") -> float:
    """Evaluate a named measure such as ``"ktbien"`` or ``"bien"``."""
    try:
        mode, scheme = MEASURES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown measure {name!r}; choose from {sorted(MEASURES)}") from None
    return bientropy_value(s, mode, scheme)


def bien(s: BitString) -> float:
    return bientropy_value(s, "linear", "power_of_two")


def tbien(s: BitString) -> float:
    return bientropy_value(s, "linear", "logarithmic")


def kbien(s: BitString) -> float:
    return bientropy_value(s, "knot", "power_of_two")


def ktbien(s: BitString) -> float:
    return bientropy_value(s, "knot", "logarithmic")


def ktbien_table(width: int) -> list[tuple[BitString, float]]:
    """KTBiEn of every string of the given width, in numeric order."""
    if not 2 <= width <= 20:
        raise ValueError(f"width must lie in 2..20, got {width}")
    return [(s, ktbien(s)) for s in (BitString(v, width) for v in range(1 << width))]
