"""Regenerate the frozen scan fixtures under tests/data.

Refuses to write anything unless the identity suite and a spot check of the
fresh scan both come back clean.
"""

import json
import sys
import time
from pathlib import Path

from subgroup_lab.harness import ScanConfig, scan, summarize
from subgroup_lab.report import to_csv
from subgroup_lab.verify import identity_suite, spot_check

DATA = Path(__file__).resolve().parents[1] / "tests" / "data"


def main():
    for name, run in identity_suite().items():
        bad = [c for c in run() if not c.ok]
        if bad:
            sys.exit(f"identity suite {name} failed: {bad[:3]}")
    small = scan(ScanConfig(p_max=13))
    t0 = time.perf_counter()
    full = scan(ScanConfig(p_max=2000))
    elapsed = time.perf_counter() - t0
    res = spot_check(full, 0.05, seed=0)
    if res.mismatches:
        sys.exit(f"spot check mismatches: {res.mismatches[:3]}")
    DATA.mkdir(exist_ok=True)
    (DATA / "scan_p13.csv").write_text(to_csv(small))
    summary = summarize(full)
    summary["_meta"] = {
        "config": "p_max=2000 d_policy=below_sqrt_p seed=0 budget=2000000",
        "records": len(full),
        "spot_checked": res.checked,
        "scan_seconds": round(elapsed, 1),
        "note": "min/max ratios over hypothesis-respecting records; later runs must not regress",
    }
    (DATA / "scan_p2000_summary.json").write_text(json.dumps(summary, indent=1) + "\n")
    print(json.dumps(summary, indent=1))


if __name__ == "__main__":
    main()
