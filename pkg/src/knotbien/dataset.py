"""Annotated NEWSUD knot datasets and their randomised controls.

Knots CSV format::

    # optional comment lines
    name,crossings,alternating,newsud
    unknot,0,,DEUW
    3_1,3,true,DDDEEUUSWWNNEEDSSSUUNNW

``crossings`` and ``alternating`` may be left empty.
"""
from __future__ import annotations

import csv
import io
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np

from .lattice import (LETTERS, MIN_KNOT_LENGTH, Direction, DirectionSequence, NewsudError,
                      ValidationReport, parse_newsud, validate_polygon)

log = logging.getLogger(__name__)

HEADER = ("name", "crossings", "alternating", "newsud")
ControlMode = Literal["iid", "permute"]


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class KnotRecord:
    name: str
    crossings: int | None
    alternating: bool | None
    newsud: DirectionSequence
    validation: ValidationReport = field(compare=False, repr=False)
    warnings: tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def build(cls, name: str, newsud: DirectionSequence | str, crossings: int | None = None,
              alternating: bool | None = None) -> "KnotRecord":
        if not name:
            raise DatasetError("record name must be non-empty")
        if isinstance(newsud, str):
            newsud = parse_newsud(newsud)
        report = validate_polygon(newsud)
        warnings = []
        if crossings is not None and crossings >= 3 and len(newsud) < MIN_KNOT_LENGTH:
            warnings.append(f"{name}: length {len(newsud)} is below the minimum knot length "
                            f"{MIN_KNOT_LENGTH}")
        return cls(name, crossings, alternating, newsud, report, tuple(warnings))

    @property
    def length(self) -> int:
        return len(self.newsud)


@dataclass(frozen=True)
class KnotDataset:
    label: str
    records: tuple[KnotRecord, ...]

    def __post_init__(self):
        seen = set()
        for r in self.records:
            if r.name in seen:
                raise DatasetError(f"duplicate record name {r.name!r}")
            seen.add(r.name)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def names(self) -> list[str]:
        return [r.name for r in self.records]

    def by_name(self) -> dict[str, KnotRecord]:
        return {r.name: r for r in self.records}

    @property
    def char_distribution(self) -> dict[str, float]:
        counts = Counter()
        for r in self.records:
            counts.update(r.newsud.letter_counts())
        total = sum(counts.values())
        if total == 0:
            return {c: 0.0 for c in LETTERS}
        return {c: counts[c] / total for c in LETTERS}

    @property
    def warnings(self) -> list[str]:
        return [w for r in self.records for w in r.warnings]


def _parse_bool(text: str, where: str) -> bool | None:
    t = text.strip().lower()
    if t == "":
        return None
    if t in ("true", "t", "yes", "1"):
        return True
    if t in ("false", "f", "no", "0"):
        return False
    raise DatasetError(f"{where}: alternating must be true/false/empty, got {text!r}")


def _parse_crossings(text: str, where: str) -> int | None:
    t = text.strip()
    if t == "":
        return None
    try:
        c = int(t)
    except ValueError:
        raise DatasetError(f"{where}: crossings must be an integer, got {text!r}") from None
    if c < 0:
        raise DatasetError(f"{where}: crossings must be >= 0")
    return c


def _comment_label(text: str) -> str | None:
    for ln in text.splitlines():
        ln = ln.strip()
        if ln.startswith("#"):
            key, sep, val = ln[1:].partition("=")
            if sep and key.strip() == "label" and val.strip():
                return val.strip()
    return None


def loads_dataset(text: str, label: str | None = None) -> KnotDataset:
    """Parse knots CSV text; the label falls back to a ``# label=`` comment."""
    label = label or _comment_label(text) or "DATASET"
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise DatasetError("knots CSV is empty")
    rows = list(csv.reader(lines))
    header = tuple(h.strip().lower() for h in rows[0])
    if header != HEADER:
        raise DatasetError(f"knots CSV header must be {','.join(HEADER)}, got {','.join(rows[0])}")
    records = []
    seen = set()
    for rowno, row in enumerate(rows[1:], start=1):
        where = f"row {rowno}"
        if len(row) != len(HEADER):
            raise DatasetError(f"{where}: expected {len(HEADER)} fields, got {len(row)}")
        name = row[0].strip()
        if not name:
            raise DatasetError(f"{where}: empty name")
        if name in seen:
            raise DatasetError(f"{where}: duplicate record name {name!r}")
        seen.add(name)
        try:
            seq = parse_newsud(row[3])
        except NewsudError as exc:
            raise DatasetError(f"{where} ({name}): {exc}") from None
        rec = KnotRecord.build(name, seq, _parse_crossings(row[1], where),
                               _parse_bool(row[2], where))
        for w in rec.warnings:
            log.warning(w)
        records.append(rec)
    if not records:
        raise DatasetError("knots CSV has no records")
    return KnotDataset(label, tuple(records))


def load_dataset(path: str | Path, label: str | None = None) -> KnotDataset:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return loads_dataset(text, label or _comment_label(text) or path.stem)


def dumps_dataset(ds: KnotDataset, comments: list[str] | None = None) -> str:
    buf = io.StringIO()
    for c in comments or []:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in ds.records:
        alt = "" if r.alternating is None else str(r.alternating).lower()
        cr = "" if r.crossings is None else str(r.crossings)
        w.writerow([r.name, cr, alt, r.newsud.source_text])
    return buf.getvalue()


def save_dataset(ds: KnotDataset, path: str | Path, comments: list[str] | None = None) -> None:
    Path(path).write_text(dumps_dataset(ds, comments), encoding="utf-8")


def generate_controls(source: KnotDataset, seed: int, label: str = "CONTROL",
                      mode: ControlMode = "iid", suffix: str | None = None) -> KnotDataset:
    """Random letter strings matched to ``source`` row by row in length.

    ``iid`` draws every letter independently from the dataset-wide letter
    distribution. ``permute`` shuffles each record's own letters, so the
    per-record letter counts are preserved exactly. Neither mode makes the
    result closed or self-avoiding.
    """
    if len(source) == 0:
        raise DatasetError("cannot build controls for an empty dataset")
    if mode not in ("iid", "permute"):
        raise DatasetError(f"unknown control mode {mode!r}")
    suffix = f":{label}" if suffix is None else suffix
    rng = np.random.Generator(np.random.PCG64(seed & 0xFFFFFFFFFFFFFFFF))
    dirs = [Direction[c] for c in LETTERS]
    cdf = np.cumsum([source.char_distribution[c] for c in LETTERS])
    cdf[-1] = 1.0
    records = []
    for r in source.records:
        if mode == "iid":
            idx = np.searchsorted(cdf, rng.random(r.length), side="right")
            seq = DirectionSequence(tuple(dirs[i] for i in idx))
        else:
            order = rng.permutation(r.length)
            seq = DirectionSequence(tuple(r.newsud.directions[i] for i in order))
        records.append(KnotRecord.build(r.name + suffix, seq, r.crossings, r.alternating))
    return KnotDataset(label, tuple(records))
