"""Command-line entry point: ``knotbien <command> ...``.

Exit codes: 0 success, 1 usage error, 2 data error. Errors go to stderr as
``knotbien: <kind>: <message>``.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .bitstring import BitString, BitStringError
from .dataset import DatasetError, generate_controls, load_dataset, save_dataset
from .encoding import (GENERATOR, EncodingError, generate_encoding_set, load_encoding_set,
                       save_encoding_set)
from .entropy import SCHEME_ALIASES, bientropy, ktbien_table
from .experiment import (GROUPINGS, BucketRow, ExperimentError, ResultTable, group_compare,
                         item_info, merge_results, run_grid, summarize)
from .lattice import NewsudError

EXIT_USAGE = 1
EXIT_DATA = 2

DATA_ERRORS = (BitStringError, NewsudError, EncodingError, DatasetError, ExperimentError,
               OSError, ValueError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: usage: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def seed_type(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit value")
    return v


def sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(path: Path, argv: list[str], seeds: list[int], inputs: list[str],
                   started: float) -> None:
    manifest = {
        "tool_version": __version__,
        "command_line": " ".join(["knotbien", *argv]),
        "seeds": seeds,
        "input_digests": {p: sha256(p) for p in inputs},
        "generator": GENERATOR,
        "started_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(started)),
        "finished_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


# -- commands -----------------------------------------------------------

def _read_bits(args) -> BitString:
    text = args.input.strip()
    if args.hex or text[:2].lower() == "0x":
        return BitString.from_hex(text, args.bits)
    s = BitString.from_text(text)
    if args.bits is not None and args.bits != s.length:
        raise BitStringError(f"--bits {args.bits} does not match input length {s.length}")
    return s


def cmd_bientropy(args) -> int:
    s = _read_bits(args)
    scheme = SCHEME_ALIASES[args.scheme]
    res = bientropy(s, args.mode, scheme)
    if args.trace:
        w = max(s.length, 5)
        print(f"{'level':<{w}}  {'ones':>4} {'len':>4} {'p':>6} {'H':>8} {'k':>4} "
              f"{'weight':>10} {'weight*H':>10}")
        for t in res.per_level:
            print(f"{str(t.level):<{w}}  {t.level.ones():>4} {t.level.length:>4} {float(t.p):>6.3f} "
                  f"{t.entropy:>8.5f} {t.k:>4} {t.weight:>10.5f} {t.weighted:>10.5f}")
        print(f"{str(res.final_level):<{w}}  (d_{s.length - 1}, not weighted)")
        print(f"weight sum (normalizer): {res.weight_sum:.6f}")
        print(f"weighted entropy sum:    {res.weighted_sum:.6f}")
    print(f"{res.value:.6f}")
    return 0


def cmd_table(args) -> int:
    for s, v in ktbien_table(args.width):
        print(f"{s.value:>7} {s} {v:.6f}")
    return 0


def cmd_validate(args) -> int:
    ds = load_dataset(args.knots)
    failed = 0
    print(f"{'name':<16} {'len':>4} {'closed':>6} {'avoid':>6}  status")
    for r in ds.records:
        rep = r.validation
        status = rep.describe()
        if r.warnings:
            status += " [" + "; ".join(r.warnings) + "]"
        failed += not rep.ok
        print(f"{r.name:<16} {rep.length:>4} {str(rep.closed).lower():>6} "
              f"{str(rep.self_avoiding).lower():>6}  {status}")
    print(f"{len(ds) - failed}/{len(ds)} records are closed self-avoiding polygons")
    if failed and args.strict:
        print(f"knotbien: data: {failed} record(s) failed validation", file=sys.stderr)
        return EXIT_DATA
    return 0


def cmd_gen_encodings(args) -> int:
    enc = generate_encoding_set(args.seed, args.count, args.width, args.label)
    save_encoding_set(enc, args.output)
    return 0


def cmd_gen_controls(args) -> int:
    src = load_dataset(args.input)
    ctl = generate_controls(src, args.seed, args.label, mode=args.mode)
    save_dataset(ctl, args.output, comments=[
        f"label={args.label}",
        f"source={Path(args.input).name} sha256={sha256(args.input)}",
        f"seed={args.seed}",
        f"mode={args.mode}",
    ])
    return 0


def cmd_experiment(args, argv) -> int:
    started = time.time()
    datasets = [load_dataset(p) for p in args.knots]
    labels = [d.label for d in datasets]
    if len(set(labels)) != len(labels):
        raise DatasetError(f"dataset labels must be distinct, got {labels}")
    encsets = [load_encoding_set(p) for p in args.encodings]
    elabels = [e.label for e in encsets]
    if len(set(elabels)) != len(elabels):
        raise EncodingError(f"encoding set labels must be distinct, got {elabels}")
    parts = [run_grid(ds, enc, args.measure, workers=args.workers)
             for enc in encsets for ds in datasets]
    results = merge_results(parts)
    # canonical order: encoding set, dataset, item, index
    results.items = item_info(*datasets)
    results.save(args.output)
    if args.summary:
        provenance = {
            "tool_version": __version__,
            "measure": args.measure,
            "generator": GENERATOR,
            "datasets": [{"label": d.label, "file": Path(p).name, "sha256": sha256(p),
                          "records": len(d)} for d, p in zip(datasets, args.knots)],
            "encoding_sets": [{"label": e.label, "seed": e.seed, "bit_width": e.bit_width,
                               "tables": len(e), "file": Path(p).name, "sha256": sha256(p)}
                              for e, p in zip(encsets, args.encodings)],
        }
        summary = summarize(results, provenance)
        Path(args.summary).write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    manifest = Path(args.manifest) if args.manifest else Path(str(args.output) + ".manifest.json")
    write_manifest(manifest, argv, [e.seed for e in encsets if e.seed is not None],
                   [*args.knots, *args.encodings], started)
    return 0


def cmd_report(args) -> int:
    results = merge_results([ResultTable.load(p) for p in args.results])
    info = item_info(*[load_dataset(p) for p in args.knots]) if args.knots else None
    out = group_compare(results, args.grouping, info, reference=args.reference,
                        dataset=args.dataset, crossings=args.crossings, raw=args.raw)
    rows = [r.as_dict() for r in out]
    if out and isinstance(out[0], BucketRow):
        print(f"{'bucket':>6} {'n_items':>7} {'mean':>12} {'sd':>12} {'sem':>12}")
        for r in out:
            print(f"{r.bucket:>6} {r.n_items:>7} {r.mean:>12.9f} {r.sd:>12.9f} {r.sem:>12.9f}")
    else:
        for g in out:
            print(f"{g.group_a} (n={g.n_a}, mean={g.mean_a:.6f}, sd={g.sd_a:.6f}) vs "
                  f"{g.group_b} (n={g.n_b}, mean={g.mean_b:.6f}, sd={g.sd_b:.6f}): "
                  f"t={g.t:.4f} df={g.df:.2f} p={g.p_two_sided:.3g}")
    if args.json:
        Path(args.json).write_text(json.dumps({"grouping": args.grouping, "rows": rows}, indent=2) + "\n",
                                   encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="knotbien", description="BiEntropy of binary strings and NEWSUD lattice knots")
    p.add_argument("--version", action="version", version=f"knotbien {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bientropy", help="BiEntropy of one bit string")
    b.add_argument("input", help="'0'/'1' text, or hex (0x prefix or --hex)")
    b.add_argument("--hex", action="store_true", help="treat input as hex")
    b.add_argument("--bits", type=int, help="bit length for hex input")
    b.add_argument("--mode", choices=("linear", "knot"), default="knot")
    b.add_argument("--scheme", choices=tuple(SCHEME_ALIASES), default="tbien")
    b.add_argument("--trace", action="store_true", help="print the per-level table")

    t = sub.add_parser("table", help="KTBiEn of every string of a given width")
    t.add_argument("--width", type=int, default=4)

    v = sub.add_parser("validate", help="check closure and self-avoidance of a knots CSV")
    v.add_argument("knots")
    v.add_argument("--strict", action="store_true", help="exit 2 if any record fails")

    g = sub.add_parser("gen-encodings", help="write a random encoding set")
    g.add_argument("--seed", type=seed_type, required=True)
    g.add_argument("--count", type=int, default=256)
    g.add_argument("--width", type=int, choices=(3, 4, 8), default=8)
    g.add_argument("--label", default="ENCODING_A")
    g.add_argument("-o", "--output", required=True)

    c = sub.add_parser("gen-controls", help="write a randomised control dataset")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--seed", type=seed_type, required=True)
    c.add_argument("--label", default="CONTROL")
    c.add_argument("--mode", choices=("iid", "permute"), default="iid")
    c.add_argument("-o", "--output", required=True)

    e = sub.add_parser("experiment", help="run the item x encoding grid")
    e.add_argument("--knots", action="append", required=True, help="knots CSV (repeatable)")
    e.add_argument("--encodings", action="append", required=True, help="encodings CSV (repeatable)")
    e.add_argument("--measure", default="ktbien",
                   choices=("bien", "tbien", "lbien", "pbien", "kbien", "ktbien", "klbien", "kpbien"))
    e.add_argument("-o", "--output", required=True, help="results CSV")
    e.add_argument("--summary", help="summary JSON")
    e.add_argument("--manifest", help="run manifest JSON (default: <output>.manifest.json)")
    e.add_argument("--workers", type=int, default=1)

    r = sub.add_parser("report", help="group statistics from results CSVs")
    r.add_argument("--results", action="append", required=True)
    r.add_argument("--knots", action="append", default=[],
                   help="knots CSVs supplying item metadata (repeatable)")
    r.add_argument("--grouping", choices=GROUPINGS, required=True)
    r.add_argument("--crossings", type=int)
    r.add_argument("--dataset", help="restrict to one dataset label")
    r.add_argument("--reference", help="dataset label of the knots in knots_vs_controls")
    r.add_argument("--raw", action="store_true", help="use every cell instead of per-item means")
    r.add_argument("--json", help="also write rows as JSON")
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="knotbien: %(levelname)s: %(message)s")
    handlers = {
        "bientropy": cmd_bientropy,
        "table": cmd_table,
        "validate": cmd_validate,
        "gen-encodings": cmd_gen_encodings,
        "gen-controls": cmd_gen_controls,
        "report": cmd_report,
    }
    try:
        if args.command == "experiment":
            return cmd_experiment(args, argv)
        return handlers[args.command](args)
    except DATA_ERRORS as exc:
        print(f"knotbien: data: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
