"""Write the committed synthetic dataset used by the stability checks.

Each item is a closed lattice walk: letter counts balance on every axis,
the order is a random shuffle, and self-avoidance is not enforced. Lengths
are even and spread over 24..64.

    python scripts/make_synthetic_dataset.py --seed 20170311 -o data/synthetic60.csv
"""
import argparse

import numpy as np

from knotbien.dataset import KnotDataset, KnotRecord, save_dataset
from knotbien.lattice import LETTERS, Direction, DirectionSequence

PAIRS = (("N", "S"), ("E", "W"), ("U", "D"))


def closed_walk(rng: np.random.Generator, length: int) -> DirectionSequence:
    half = length // 2
    # every axis gets at least one step pair
    cuts = np.sort(rng.choice(np.arange(1, half), size=2, replace=False))
    per_axis = np.diff([0, *cuts, half])
    letters = []
    for (a, b), k in zip(PAIRS, per_axis):
        letters += [a] * int(k) + [b] * int(k)
    rng.shuffle(letters)
    return DirectionSequence(tuple(Direction[c] for c in letters))


def make(seed: int, count: int = 60, lo: int = 24, hi: int = 64) -> KnotDataset:
    rng = np.random.Generator(np.random.PCG64(seed))
    lengths = np.linspace(lo, hi, count)
    records = []
    for i, L in enumerate(lengths):
        L = int(round(L / 2)) * 2
        records.append(KnotRecord.build(f"syn{i:02d}", closed_walk(rng, L)))
    return KnotDataset("SYNTHETIC", tuple(records))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=lambda s: int(s, 0), default=20170311)
    ap.add_argument("--count", type=int, default=60)
    ap.add_argument("-o", "--output", default="data/synthetic60.csv")
    args = ap.parse_args()
    ds = make(args.seed, args.count)
    assert set(LETTERS) >= {c for r in ds for c in r.newsud.source_text}
    save_dataset(ds, args.output, comments=[
        "label=SYNTHETIC",
        f"closed random lattice walks (not self-avoiding), seed={args.seed}",
        "regenerate: python scripts/make_synthetic_dataset.py",
    ])


if __name__ == "__main__":
    main()
