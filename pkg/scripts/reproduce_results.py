"""Run every scan at its default size and write JSON reports plus a text summary.

    python scripts/reproduce_results.py --out results --workers 4
"""

import argparse
import json
import time
from pathlib import Path

from chm6 import cli
from chm6.catalog import tao
from chm6.core import OMEGA, DEFAULT_TOL
from chm6.equivalence import are_equivalent
from chm6.search import (
    default_grid,
    default_three_samples,
    default_two_samples,
    find_chm_cliques,
    karlsson_grid_scan,
    scan_three_element,
    scan_two_element,
)


def timed(label, fn):
    start = time.perf_counter()
    value = fn()
    print(f"{label}: {time.perf_counter() - start:.1f} s")
    return value


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--two", type=int, default=360)
    ap.add_argument("--three", type=int, default=180)
    ap.add_argument("--grid", type=int, default=32)
    ap.add_argument("--zdraws", type=int, default=4)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    docs = {}
    two = timed("two-element scan", lambda: scan_two_element(default_two_samples(args.two), DEFAULT_TOL, args.workers))
    docs["scan_two"] = {"command": "scan-two", "header": cli.SCAN_HEADER, "reports": [r.to_json() for r in two]}
    three = timed(
        "three-element scan",
        lambda: scan_three_element(default_three_samples(args.three), DEFAULT_TOL, args.workers),
    )
    docs["scan_three"] = {"command": "scan-three", "header": cli.SCAN_HEADER, "reports": [r.to_json() for r in three]}
    grid = default_grid(args.grid)
    kar = timed("Karlsson grid scan", lambda: karlsson_grid_scan(grid, grid, args.zdraws, args.seed))
    docs["scan_karlsson"] = {"command": "scan-karlsson", **kar.to_json()}

    omega = timed("{1, w, w^2} clique search", lambda: find_chm_cliques([1, OMEGA, OMEGA.conjugate()]))
    t = tao()
    docs["omega_alphabet"] = {
        "matrices": len(omega),
        "all_equivalent_to_tao": all(are_equivalent(m, t) is not None for m in omega),
    }

    summary = []
    for name, doc in docs.items():
        (args.out / f"{name}.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        summary.append(f"## {name}")
        summary.append(cli.render(doc) if "matrices" not in doc else json.dumps(doc))
    (args.out / "summary.txt").write_text("\n".join(summary) + "\n")
    print(f"wrote {len(docs)} reports to {args.out}/")


if __name__ == "__main__":
    main()
