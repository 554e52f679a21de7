#!/usr/bin/env python3
"""Run every bundled example job and print the instability summary table.

Equivalent to `flopslope verify-examples` plus a compact digest of the key
outputs (polynomial after the c-rule, thresholds, verdicts).
"""

import json
import sys
from pathlib import Path

from flopslope.cli import main as cli_main
from flopslope.jobs import bundled_job_paths


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("flopslope-verify")
    code = cli_main(["verify-examples", "--out", str(out)])
    print()
    print("job".ljust(28), "verdict".ljust(16), "after c-rule / thresholds")
    print("-" * 88)
    for path in bundled_job_paths():
        name = path.stem
        report_path = out / f"{name}.json"
        if not report_path.exists():
            continue
        report = json.loads(report_path.read_text())["report"]
        poly = report.get("futaki_after_c_rule") or "-"
        thresholds = ", ".join(
            t["exact"] or t["approx"] for t in report.get("thresholds", [])) or "-"
        print(name.ljust(28), report["verdict"].ljust(16), f"{poly}   [{thresholds}]")
    return code


if __name__ == "__main__":
    sys.exit(main())
