"""Monte Carlo grid over (item, encoding) cells and the statistics run on it.

Results CSV::

    item,encoding_set,encoding_index,measure,value

Rows are kept in (encoding set, item, encoding index) order and values
are written with 9 significant digits, so repeated runs produce
byte-identical files whatever the worker count.
"""
from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from scipy.special import betainc

from .dataset import KnotDataset
from .encoding import EncodingSet, EncodingTable, encode_sequence
from .entropy import MEASURES, bientropy_value
from .lattice import parse_newsud

RESULTS_HEADER = ("item", "encoding_set", "encoding_index", "measure", "value")
GROUPINGS = ("knots_vs_controls", "alternating_vs_non", "by_crossings", "by_length")


class ExperimentError(ValueError):
    pass


def fmt(x: float) -> str:
    return format(x, ".9g")


def round9(x: float) -> float:
    return float(fmt(x))


@dataclass(frozen=True)
class ResultRow:
    item: str
    encoding_set: str
    encoding_index: int
    value: float


@dataclass(frozen=True)
class ItemInfo:
    name: str
    dataset: str
    length: int
    crossings: int | None = None
    alternating: bool | None = None


def item_info(*datasets: KnotDataset) -> dict[str, ItemInfo]:
    out = {}
    for ds in datasets:
        for r in ds.records:
            out[r.name] = ItemInfo(r.name, ds.label, r.length, r.crossings, r.alternating)
    return out


@dataclass
class ResultTable:
    rows: list[ResultRow]
    measure: str = "ktbien"
    metadata: dict = field(default_factory=dict)
    items: dict[str, ItemInfo] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.rows)

    def encoding_sets(self) -> list[str]:
        return list(dict.fromkeys(r.encoding_set for r in self.rows))

    def item_names(self) -> list[str]:
        return list(dict.fromkeys(r.item for r in self.rows))

    def values_by_item(self, encoding_set: str | None = None) -> dict[str, list[float]]:
        out: dict[str, list[float]] = defaultdict(list)
        for r in self.rows:
            if encoding_set is None or r.encoding_set == encoding_set:
                out[r.item].append(r.value)
        return dict(out)

    def check_complete(self) -> None:
        """Every item must have one cell per encoding index of every set."""
        cells = defaultdict(set)
        indices = defaultdict(set)
        for r in self.rows:
            key = (r.item, r.encoding_set, r.encoding_index)
            if key in cells[r.encoding_set]:
                raise ExperimentError(f"duplicate cell {key}")
            cells[r.encoding_set].add(key)
            indices[r.encoding_set].add(r.encoding_index)
        items = set(self.item_names())
        for es, keys in cells.items():
            if len(keys) != len(items) * len(indices[es]):
                raise ExperimentError(f"incomplete grid for encoding set {es!r}")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(RESULTS_HEADER)
        for r in self.rows:
            w.writerow([r.item, r.encoding_set, r.encoding_index, self.measure, fmt(r.value)])
        return buf.getvalue()

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv(), encoding="utf-8")

    @classmethod
    def from_csv(cls, text: str) -> "ResultTable":
        rows = list(csv.reader(text.splitlines()))
        if not rows or tuple(h.strip() for h in rows[0]) != RESULTS_HEADER:
            raise ExperimentError(f"results CSV header must be {','.join(RESULTS_HEADER)}")
        out = []
        measures = set()
        for rowno, row in enumerate(rows[1:], start=1):
            if not row:
                continue
            if len(row) != len(RESULTS_HEADER):
                raise ExperimentError(f"results row {rowno}: expected 5 fields")
            try:
                out.append(ResultRow(row[0], row[1], int(row[2]), float(row[4])))
            except ValueError:
                raise ExperimentError(f"results row {rowno}: malformed number") from None
            measures.add(row[3])
        if len(measures) > 1:
            raise ExperimentError(f"mixed measures in one results file: {sorted(measures)}")
        return cls(out, measures.pop() if measures else "ktbien")

    @classmethod
    def load(cls, path: str | Path) -> "ResultTable":
        return cls.from_csv(Path(path).read_text(encoding="utf-8"))


def merge_results(tables: Sequence[ResultTable]) -> ResultTable:
    if not tables:
        raise ExperimentError("nothing to merge")
    measures = {t.measure for t in tables}
    if len(measures) != 1:
        raise ExperimentError(f"cannot merge different measures {sorted(measures)}")
    rows, items = [], {}
    for t in tables:
        rows.extend(t.rows)
        items.update(t.items)
    return ResultTable(rows, tables[0].measure, {"parts": [t.metadata for t in tables]}, items)


# -- the grid -----------------------------------------------------------

def _item_values(newsud: str, tables: tuple[EncodingTable, ...], mode: str, scheme: str) -> list[float]:
    seq = parse_newsud(newsud)
    return [bientropy_value(encode_sequence(seq, t), mode, scheme) for t in tables]


def run_grid(dataset: KnotDataset, encodings: EncodingSet, measure: str = "ktbien",
             workers: int = 1) -> ResultTable:
    """Evaluate ``measure`` on every (item, encoding table) cell.

    Cells may be computed in parallel; the table is always assembled in
    dataset order, then encoding index order.
    """
    if len(dataset) == 0:
        raise ExperimentError("dataset is empty")
    if len(encodings) == 0:
        raise ExperimentError("encoding set is empty")
    try:
        mode, scheme = MEASURES[measure.lower()]
    except KeyError:
        raise ExperimentError(f"unknown measure {measure!r}") from None
    tables = tuple(encodings.tables)
    texts = [r.newsud.source_text for r in dataset.records]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_item_values, t, tables, mode, scheme) for t in texts]
            values = [f.result() for f in futures]
    else:
        values = [_item_values(t, tables, mode, scheme) for t in texts]
    rows = [ResultRow(rec.name, encodings.label, j, v)
            for rec, vals in zip(dataset.records, values)
            for j, v in enumerate(vals)]
    meta = {
        "measure": measure.lower(),
        "dataset": dataset.label,
        "encoding_set": encodings.label,
        "seed": encodings.seed,
        "bit_width": encodings.bit_width,
        "tables": len(encodings),
    }
    return ResultTable(rows, measure.lower(), meta, item_info(dataset))


# -- statistics ---------------------------------------------------------

def mean(xs: Sequence[float]) -> float:
    return math.fsum(xs) / len(xs)


def sample_sd(xs: Sequence[float]) -> float:
    if len(xs) < 2:
        return 0.0
    m = mean(xs)
    return math.sqrt(math.fsum((x - m) ** 2 for x in xs) / (len(xs) - 1))


@dataclass(frozen=True)
class ItemAggregate:
    item: str
    n: int
    mean: float
    sd: float
    sem: float
    min: float
    max: float


def aggregate(results: ResultTable) -> list[ItemAggregate]:
    """Per-item statistics pooled over all encodings of all sets.

    Items are listed in first-appearance order. A single-cell item gets
    sd = sem = 0.
    """
    out = []
    for item, vals in results.values_by_item().items():
        sd = sample_sd(vals)
        out.append(ItemAggregate(item, len(vals), mean(vals), sd, sd / math.sqrt(len(vals)),
                                 min(vals), max(vals)))
    return out


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise ValueError("need at least two points")
    mx, my = mean(xs), mean(ys)
    dx = [x - mx for x in xs]
    dy = [y - my for y in ys]
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    if sxx == 0 or syy == 0:
        raise ValueError("correlation undefined for constant input")
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class GroupStats:
    group_a: str
    group_b: str
    n_a: int
    n_b: int
    mean_a: float
    mean_b: float
    sd_a: float
    sd_b: float
    t: float
    df: float
    p_two_sided: float

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        for k, v in d.items():
            if isinstance(v, float):
                d[k] = round9(v)
        return d


def student_t_sf2(t: float, df: float) -> float:
    """Two-sided tail probability P(|T| >= |t|) for Student's t."""
    if math.isinf(t):
        return 0.0
    return float(betainc(df / 2.0, 0.5, df / (df + t * t)))


def welch_t_test(a: Sequence[float], b: Sequence[float], group_a: str = "a",
                 group_b: str = "b") -> GroupStats:
    """Welch's unequal-variance two-sample t-test, two-sided."""
    na, nb = len(a), len(b)
    if na < 2 or nb < 2:
        raise ValueError("each group needs at least two observations")
    ma, mb = mean(a), mean(b)
    sa, sb = sample_sd(a), sample_sd(b)
    va, vb = sa * sa / na, sb * sb / nb
    if va + vb == 0:
        raise ValueError("both groups have zero variance")
    t = (ma - mb) / math.sqrt(va + vb)
    df = (va + vb) ** 2 / (va * va / (na - 1) + vb * vb / (nb - 1))
    return GroupStats(group_a, group_b, na, nb, ma, mb, sa, sb, t, df, student_t_sf2(t, df))


@dataclass(frozen=True)
class BucketRow:
    bucket: int
    n_items: int
    mean: float
    sd: float
    sem: float

    def as_dict(self) -> dict:
        return {"bucket": self.bucket, "n_items": self.n_items, "mean": round9(self.mean),
                "sd": round9(self.sd), "sem": round9(self.sem)}


def _observations(results: ResultTable, names: Iterable[str], raw: bool) -> list[float]:
    by_item = results.values_by_item()
    obs = []
    for n in names:
        vals = by_item[n]
        if raw:
            obs.extend(vals)
        else:
            obs.append(mean(vals))
    return obs


def _info(results: ResultTable, items: dict[str, ItemInfo] | None) -> dict[str, ItemInfo]:
    info = dict(results.items)
    if items:
        info.update(items)
    missing = [n for n in results.item_names() if n not in info]
    if missing:
        raise ExperimentError(f"no metadata for items {missing[:5]}{'...' if len(missing) > 5 else ''}")
    return info


def group_compare(results: ResultTable, grouping: str, items: dict[str, ItemInfo] | None = None,
                  *, reference: str | None = None, dataset: str | None = None,
                  crossings: int | None = None, raw: bool = False):
    """Grouped comparisons over per-item means (or raw cells with ``raw=True``).

    ``knots_vs_controls``
        items of the ``reference`` dataset (default: the first one seen)
        against each other dataset, plus all others pooled when there are
        several. Returns GroupStats.
    ``alternating_vs_non``
        non-alternating against alternating items, for ``crossings`` if
        given, else for every crossing number where both groups have at
        least two items. Returns GroupStats.
    ``by_crossings`` / ``by_length``
        mean of per-item means in each bucket. Returns BucketRow.

    ``dataset`` restricts the last three groupings to one dataset label.
    """
    if grouping not in GROUPINGS:
        raise ExperimentError(f"unknown grouping {grouping!r}; choose from {GROUPINGS}")
    info = _info(results, items)
    names = results.item_names()

    if grouping == "knots_vs_controls":
        labels = list(dict.fromkeys(info[n].dataset for n in names))
        ref = reference or labels[0]
        if ref not in labels:
            raise ExperimentError(f"reference dataset {ref!r} not present")
        others = [lab for lab in labels if lab != ref]
        if not others:
            raise ExperimentError("knots_vs_controls needs at least one control dataset")
        knots = _observations(results, [n for n in names if info[n].dataset == ref], raw)
        out = []
        for lab in others:
            ctl = _observations(results, [n for n in names if info[n].dataset == lab], raw)
            out.append(welch_t_test(ctl, knots, lab, ref))
        if len(others) > 1:
            ctl = _observations(results, [n for n in names if info[n].dataset != ref], raw)
            out.append(welch_t_test(ctl, knots, "+".join(others), ref))
        return out

    if dataset is not None:
        names = [n for n in names if info[n].dataset == dataset]
        if not names:
            raise ExperimentError(f"no items from dataset {dataset!r}")

    if grouping == "alternating_vs_non":
        usable = [n for n in names if info[n].alternating is not None and info[n].crossings is not None]
        if not usable:
            raise ExperimentError("no item carries both alternating and crossings metadata")
        if crossings is not None:
            levels = [crossings]
        else:
            levels = sorted({info[n].crossings for n in usable})
        out = []
        for c in levels:
            alt = [n for n in usable if info[n].crossings == c and info[n].alternating]
            non = [n for n in usable if info[n].crossings == c and not info[n].alternating]
            if crossings is None and (len(alt) < 2 or len(non) < 2):
                continue
            out.append(welch_t_test(_observations(results, non, raw), _observations(results, alt, raw),
                                    f"non-alternating c={c}", f"alternating c={c}"))
        return out

    key = (lambda n: info[n].crossings) if grouping == "by_crossings" else (lambda n: info[n].length)
    buckets: dict[int, list[str]] = defaultdict(list)
    for n in names:
        k = key(n)
        if k is not None:
            buckets[k].append(n)
    if not buckets:
        raise ExperimentError(f"{grouping}: metadata missing for all items")
    out = []
    for k in sorted(buckets):
        means = _observations(results, buckets[k], raw=False)
        sd = sample_sd(means)
        out.append(BucketRow(k, len(means), mean(means), sd, sd / math.sqrt(len(means))))
    return out


def cross_set_correlation(results: ResultTable) -> list[dict]:
    """Pearson r of per-item means between every pair of encoding sets."""
    sets = results.encoding_sets()
    means = {s: {k: mean(v) for k, v in results.values_by_item(s).items()} for s in sets}
    out = []
    for i, a in enumerate(sets):
        for b in sets[i + 1:]:
            common = [n for n in means[a] if n in means[b]]
            xs = [means[a][n] for n in common]
            ys = [means[b][n] for n in common]
            out.append({"set_a": a, "set_b": b, "n_items": len(common), "pearson_r": round9(pearson(xs, ys))})
    return out


def summarize(results: ResultTable, provenance: dict | None = None) -> dict:
    """Deterministic summary: per-item aggregates, cross-set r, group statistics."""
    aggs = aggregate(results)
    summary: dict = {
        "measure": results.measure,
        "n_rows": len(results),
        "encoding_sets": results.encoding_sets(),
        "items": [
            {"item": a.item, "n": a.n, "mean": round9(a.mean), "sd": round9(a.sd),
             "sem": round9(a.sem), "min": round9(a.min), "max": round9(a.max)}
            for a in aggs
        ],
        "grand_mean": round9(mean([a.mean for a in aggs])),
    }
    if len(summary["encoding_sets"]) > 1:
        summary["cross_set_correlation"] = cross_set_correlation(results)
    groups: dict = {}
    info = results.items
    if info and all(n in info for n in results.item_names()):
        if len({info[n].dataset for n in results.item_names()}) > 1:
            groups["knots_vs_controls"] = [g.as_dict() for g in group_compare(results, "knots_vs_controls")]
        groups["by_length"] = [b.as_dict() for b in group_compare(results, "by_length")]
        if any(i.crossings is not None for i in info.values()):
            groups["by_crossings"] = [b.as_dict() for b in group_compare(results, "by_crossings")]
        try:
            alt = group_compare(results, "alternating_vs_non")
        except ExperimentError:
            alt = []
        if alt:
            groups["alternating_vs_non"] = [g.as_dict() for g in alt]
    summary["groups"] = groups
    summary["provenance"] = provenance or {}
    return summary
