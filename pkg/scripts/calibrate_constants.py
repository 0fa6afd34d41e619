#!/usr/bin/env python3
"""Re-measure the truthful sort worst cases and the quicksort thickness ratio,
then print the constants block that liarminmax/config.py freezes.

Small sizes are swept over every permutation (s <= 8); the larger sizes over
seeded random permutations.  Expect a minute or two at the default settings.

Usage: python3 scripts/calibrate_constants.py [--trials 40] [--out calibration.cfg]
"""

import argparse
import time

from liarminmax.harness import calibrate
from liarminmax.sorters import SortBudget


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=40)
    parser.add_argument("--seed", type=int, default=2026)
    parser.add_argument("--out", default="calibration.cfg")
    args = parser.parse_args()

    started = time.perf_counter()
    result = calibrate(
        sizes=(16, 32, 64, 128, 256, 512, 1024, 2048, 4096),
        trials=args.trials,
        seed=args.seed,
        out_path=args.out,
    )
    elapsed = time.perf_counter() - started

    print(f"# calibrated in {elapsed:.0f}s; wrote {args.out}")
    print(f"sort_budget_linear={result.constants.sort_budget_linear}")
    print(f"sort_budget_log={result.constants.sort_budget_log}")
    print(f"thickness_ct={result.constants.thickness_ct}")
    print(f"# max observed sort count at {result.max_sort_ratio:.3f} of the budget formula")
    print(f"# max observed thickness at {result.max_thickness_ratio:.3f} of s")
    for s, comparisons, thickness in result.details:
        budget = SortBudget.default_for(s).max_comparisons
        print(f"#   s={s}: comparisons max {comparisons} / budget {budget}, thickness max {thickness}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
