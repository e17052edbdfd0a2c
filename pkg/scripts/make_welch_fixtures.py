"""Write the two-sample fixtures used to check the Welch test against a permutation test.

Each fixture is two equal-size normal samples, so a permutation test of the
mean difference and Welch's test share the same null variance. The second
sample is shifted so that Welch's two-sided p lands near the target.

    python scripts/make_welch_fixtures.py -o tests/fixtures
"""
import argparse
import json
from pathlib import Path

import numpy as np
from scipy import stats

TARGETS = {"p050": 0.5, "p010": 0.01, "p001": 0.001}


def make(target: float, seed: int) -> dict:
    rng = np.random.Generator(np.random.PCG64(seed))
    a = rng.normal(0.980, 0.002, 60)
    b = rng.normal(0.980, 0.0025, 60)
    va, vb = a.var(ddof=1) / a.size, b.var(ddof=1) / b.size
    df = (va + vb) ** 2 / (va**2 / (a.size - 1) + vb**2 / (b.size - 1))
    t = stats.t.isf(target / 2, df)
    b = b - b.mean() + a.mean() + t * np.sqrt(va + vb)
    return {"target_p": target, "seed": seed,
            "a": [float(f"{x:.9g}") for x in a], "b": [float(f"{x:.9g}") for x in b]}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-o", "--outdir", default="tests/fixtures")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for i, (name, p) in enumerate(TARGETS.items()):
        (out / f"welch_{name}.json").write_text(json.dumps(make(p, 1000 + i)) + "\n")


if __name__ == "__main__":
    main()
