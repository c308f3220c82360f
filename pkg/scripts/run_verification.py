#!/usr/bin/env python3
"""Full verification sweep: stability bounds, pointwise bounds, truncation.

Writes one CSV per sweep to the output directory and prints a summary
line each.  Exit status is nonzero if any sweep records a violation.
"""

import argparse
import sys
import time
from pathlib import Path

from submodstab.noise import DEFAULT_RHO_GRID
from submodstab.sweeps import (
    generate_suite,
    lowdeg_sweep,
    pointwise_sweep,
    stability_sweep,
)


def write_csv(path: Path, result) -> None:
    with path.open("w") as fh:
        fh.write(result.header + "\n")
        for row in result.rows:
            fh.write(row.csv() + "\n")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--sizes", type=int, nargs="+", default=list(range(2, 13)))
    ap.add_argument("--seed", type=int, default=20260814)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    ok = True
    for name, uniform, sweep in [
        ("stability_product", False, stability_sweep),
        ("stability_uniform", True, stability_sweep),
        ("pointwise_product", False, pointwise_sweep),
        ("pointwise_uniform", True, pointwise_sweep),
        ("lowdeg", False, lowdeg_sweep),
    ]:
        suite = generate_suite(args.count, args.sizes, seed=args.seed, uniform=uniform)
        t0 = time.perf_counter()
        grid = DEFAULT_RHO_GRID if sweep is not lowdeg_sweep else None
        res = sweep(suite, grid) if grid is not None else sweep(suite)
        dt = time.perf_counter() - t0
        write_csv(args.out_dir / f"{name}.csv", res)
        print(
            f"{name}: {len(res.rows)} rows, min_slack={res.min_slack:.3e}, "
            f"ok={res.ok}, {dt:.1f}s"
        )
        ok = ok and res.ok
        if res.norm_ratios:
            finite = [r for r in res.norm_ratios if r != float("inf")]
            print(
                f"  norm ratio: max={max(finite):.3f} "
                f"mean={sum(finite) / len(finite):.3f}"
            )
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
