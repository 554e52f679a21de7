#!/usr/bin/env python3
"""Sample the corrected invariant of a flop job on a rational angle grid and
write a plot-ready CSV next to the report.

Usage: sample_instability_curve.py [job_name] [lo:hi:step] [out_dir]
"""

import sys
from pathlib import Path

from flopslope.cli import main as cli_main
from flopslope.jobs import bundled_job_paths


def main() -> int:
    name = sys.argv[1] if len(sys.argv) > 1 else "f1_anticanonical_flop"
    grid = sys.argv[2] if len(sys.argv) > 2 else "1/100:1:1/100"
    out = sys.argv[3] if len(sys.argv) > 3 else "flopslope-grid"
    jobs = {p.stem: p for p in bundled_job_paths()}
    if name not in jobs:
        print(f"unknown bundled job {name!r}; choices: {', '.join(sorted(jobs))}",
              file=sys.stderr)
        return 2
    code = cli_main(["run", str(jobs[name]), "--out", out, "--grid", grid])
    if code == 0:
        print(f"CSV grid written under {Path(out).resolve()}")
    return code


if __name__ == "__main__":
    sys.exit(main())
