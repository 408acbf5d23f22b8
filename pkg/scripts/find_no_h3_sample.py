"""Scan seeded Karlsson samples until one has no 3x3 Hadamard block, then save it.

The existence of such a sample is recorded, not assumed; the script reports
how many draws it took and the classify-h3 verdict.
"""

import argparse
import math

import numpy as np

from chm6.catalog import KarlssonParams, karlsson, karlsson_completion
from chm6.jsonio import save_matrix
from chm6.search import classify_h3
from chm6.substructure import find_h2_blocks, find_h3_blocks


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-draws", type=int, default=1000)
    ap.add_argument("--out", default="no_h3_sample.json")
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    for draw in range(1, args.max_draws + 1):
        theta, phi = rng.uniform(0, math.pi, size=2)
        z = karlsson_completion(theta, phi, np.exp(2j * math.pi * rng.uniform()))
        m = karlsson(KarlssonParams(theta, phi, z))
        if not find_h3_blocks(m):
            save_matrix(m, args.out)
            print(f"draw {draw}: theta={theta:.6f} phi={phi:.6f}")
            print(f"2x2 Hadamard blocks: {len(find_h2_blocks(m))}")
            print(f"classify-h3: {classify_h3(m).kind.value}")
            print(f"saved to {args.out}")
            return
    print(f"no sample without a 3x3 Hadamard block in {args.max_draws} draws")


if __name__ == "__main__":
    main()
