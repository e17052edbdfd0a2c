"""Random injective k-bit encodings of the six NEWSUD directions.

There are 8!/2! = 20,160 distinct 3-bit tables and 256!/250! ~ 2.65e14
distinct 8-bit tables, so experiments sample a few hundred of them.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bitstring import BitString
from .lattice import LETTERS, DirectionSequence

ALLOWED_WIDTHS = (3, 4, 8)
GENERATOR = "numpy.random.PCG64 + partial Fisher-Yates over range(2**bit_width)"


class EncodingError(ValueError):
    pass


def encoding_space_size(bit_width: int) -> int:
    """Number of injective tables: (2**w)! / (2**w - 6)!."""
    return math.perm(2**bit_width, len(LETTERS))


@dataclass(frozen=True)
class EncodingTable:
    bit_width: int
    codes: tuple[int, ...]  # in N, E, W, S, U, D order

    def __post_init__(self):
        if len(self.codes) != len(LETTERS):
            raise EncodingError(f"need {len(LETTERS)} codes, got {len(self.codes)}")
        top = 1 << self.bit_width
        for letter, c in zip(LETTERS, self.codes):
            if not 0 <= c < top:
                raise EncodingError(f"code {c} for {letter} out of range for {self.bit_width} bits")
        if len(set(self.codes)) != len(self.codes):
            raise EncodingError(f"duplicate code in {self.codes}")

    @classmethod
    def from_mapping(cls, codes: dict[str, int], bit_width: int) -> "EncodingTable":
        return cls(bit_width, tuple(codes[letter] for letter in LETTERS))

    def as_dict(self) -> dict[str, int]:
        return dict(zip(LETTERS, self.codes))

    def __getitem__(self, letter: str) -> int:
        return self.codes[LETTERS.index(letter)]


@dataclass(frozen=True)
class EncodingSet:
    label: str
    seed: int | None
    bit_width: int
    tables: tuple[EncodingTable, ...]

    def __len__(self) -> int:
        return len(self.tables)

    def __iter__(self):
        return iter(self.tables)

    def __getitem__(self, i: int) -> EncodingTable:
        return self.tables[i]


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & 0xFFFFFFFFFFFFFFFF))


def generate_encoding_set(seed: int, count: int = 256, bit_width: int = 8,
                          label: str = "ENCODING") -> EncodingSet:
    """Draw ``count`` independent tables; repeats between tables are allowed."""
    if bit_width not in ALLOWED_WIDTHS:
        raise EncodingError(f"bit_width must be one of {ALLOWED_WIDTHS}, got {bit_width}")
    if count < 1:
        raise EncodingError("count must be >= 1")
    rng = _rng(seed)
    size = 1 << bit_width
    tables = []
    for _ in range(count):
        pool = list(range(size))
        for i in range(len(LETTERS)):
            j = int(rng.integers(i, size))
            pool[i], pool[j] = pool[j], pool[i]
        tables.append(EncodingTable(bit_width, tuple(pool[:len(LETTERS)])))
    return EncodingSet(label, seed, bit_width, tuple(tables))


def encode_sequence(seq: DirectionSequence, table: EncodingTable) -> BitString:
    """Concatenate each direction's code, most significant bit first."""
    w = table.bit_width
    lookup = table.as_dict()
    v = 0
    for d in seq:
        v = (v << w) | lookup[d.name]
    return BitString(v, w * len(seq))


# -- CSV persistence ----------------------------------------------------

def dumps_encoding_set(enc: EncodingSet) -> str:
    buf = io.StringIO()
    buf.write(f"# label={enc.label}\n")
    if enc.seed is not None:
        buf.write(f"# seed={enc.seed}\n")
    buf.write(f"# bit_width={enc.bit_width}\n")
    buf.write(f"# generator={GENERATOR}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(LETTERS))
    for t in enc.tables:
        w.writerow(t.codes)
    return buf.getvalue()


def save_encoding_set(enc: EncodingSet, path: str | Path) -> None:
    Path(path).write_text(dumps_encoding_set(enc), encoding="utf-8")


def _parse_int(text: str) -> int:
    return int(text, 0)


def loads_encoding_set(text: str, label: str | None = None) -> EncodingSet:
    meta: dict[str, str] = {}
    body = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            key, sep, val = stripped[1:].partition("=")
            if sep:
                meta[key.strip()] = val.strip()
        elif stripped:
            body.append(stripped)
    if not body:
        raise EncodingError("encodings CSV has no header")
    rows = list(csv.reader(body))
    header = [h.strip().upper() for h in rows[0]]
    if header != list(LETTERS):
        raise EncodingError(f"encodings CSV header must be {','.join(LETTERS)}, got {','.join(rows[0])}")
    cells = []
    for rowno, row in enumerate(rows[1:], start=1):
        if len(row) != len(LETTERS):
            raise EncodingError(f"row {rowno}: expected {len(LETTERS)} values, got {len(row)}")
        try:
            cells.append(tuple(int(c.strip()) for c in row))
        except ValueError:
            raise EncodingError(f"row {rowno}: non-integer cell") from None
    if not cells:
        raise EncodingError("encodings CSV has no rows")

    if "bit_width" in meta:
        width = int(meta["bit_width"])
    else:
        # smallest allowed width that holds every code
        top = max(max(r) for r in cells)
        width = next((w for w in ALLOWED_WIDTHS if top < (1 << w)), None)
        if width is None:
            raise EncodingError(f"code {top} exceeds 8 bits")
    tables = []
    for rowno, codes in enumerate(cells, start=1):
        try:
            tables.append(EncodingTable(width, codes))
        except EncodingError as exc:
            raise EncodingError(f"row {rowno}: {exc}") from None
    seed = _parse_int(meta["seed"]) if "seed" in meta else None
    return EncodingSet(label or meta.get("label", "ENCODING"), seed, width, tuple(tables))


def load_encoding_set(path: str | Path, label: str | None = None) -> EncodingSet:
    return loads_encoding_set(Path(path).read_text(encoding="utf-8"), label)
