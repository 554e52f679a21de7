"""Command-line front end: run jobs, inspect the catalog, verify the bundled
example suite."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import CatalogError, get_entry, load_entries
from .jobs import (
    EXIT_INVALID,
    EXIT_OK,
    bundled_job_paths,
    check_expectations,
    load_job,
    prepare_job,
    execute,
    run_job_file,
    JobParseError,
    CONFIG_ERRORS,
)
from .report import atomic_write, canonical_json_bytes, report_document


def _cmd_run(args) -> int:
    code, messages, files = run_job_file(Path(args.job), Path(args.out),
                                         gamma=args.gamma, grid=args.grid,
                                         dprime=args.override_dprime)
    stream = sys.stdout if code == EXIT_OK else sys.stderr
    for line in messages:
        print(line, file=stream)
    for f in files:
        print(f"wrote {f}")
    return code


def _cmd_catalog(args) -> int:
    if args.action == "list":
        entries = load_entries()
        for name in sorted(entries):
            print(f"{name}\t{entries[name].description}")
        return EXIT_OK
    try:
        entry = get_entry(args.name)
    except CatalogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    built = entry.build()
    doc = built.pair.to_json()
    doc["description"] = entry.description
    if built.z is not None:
        doc["z"] = built.z.to_json()
        doc["z_is_boundary"] = built.z_is_boundary
        doc["z_self_intersection"] = str(built.z.dot(built.z))
    print(json.dumps(doc, sort_keys=True, indent=2))
    return EXIT_OK


def _cmd_verify(args) -> int:
    out_dir = Path(args.out)
    rows = []
    all_ok = True
    for path in bundled_job_paths():
        try:
            doc = load_job(path)
            ctx = prepare_job(doc)
            report, csv_text = execute(ctx)
        except (JobParseError, *CONFIG_ERRORS) as exc:
            rows.append(("FAIL", path.stem, f"error: {exc}"))
            all_ok = False
            continue
        document = report_document(doc, report.to_json())
        atomic_write(out_dir / f"{doc['name']}.json", canonical_json_bytes(document))
        if csv_text is not None:
            atomic_write(out_dir / f"{doc['name']}.csv", csv_text.encode("utf-8"))
        checks = check_expectations(doc, document)
        if not checks:
            rows.append(("PASS", doc["name"], "verdict " + report.verdict.value))
            continue
        for pointer, ok, detail in checks:
            rows.append(("PASS" if ok else "FAIL", doc["name"], f"{pointer}: {detail}"))
            all_ok = all_ok and ok
    width = max(len(r[1]) for r in rows) if rows else 0
    for status, name, detail in rows:
        print(f"{status}  {name.ljust(width)}  {detail}")
    passed = sum(1 for r in rows if r[0] == "PASS")
    print(f"{passed}/{len(rows)} checks passed")
    return EXIT_OK if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flopslope",
        description="Exact slope and flop-slope stability analysis for "
                    "log del Pezzo surface pairs.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a job file and write its report")
    run.add_argument("job", help="path to a job JSON file")
    run.add_argument("--out", default="flopslope-out", help="output directory")
    run.add_argument("--grid", metavar="LO:HI:STEP",
                     help="override the beta mode with a sampling grid")
    run.add_argument("--gamma", metavar="P/Q", help="override the gamma value")
    run.add_argument("--override-dprime", metavar="LIST",
                     help="comma-separated boundary pairings for the flopped curves")
    run.set_defaults(func=_cmd_run)

    cat = sub.add_parser("catalog", help="inspect bundled surfaces")
    cat_sub = cat.add_subparsers(dest="action", required=True)
    cat_list = cat_sub.add_parser("list", help="list catalog entries")
    cat_list.set_defaults(func=_cmd_catalog, action="list")
    cat_show = cat_sub.add_parser("show", help="dump one catalog entry")
    cat_show.add_argument("name")
    cat_show.set_defaults(func=_cmd_catalog, action="show")

    verify = sub.add_parser("verify-examples",
                            help="run the bundled example suite and print a pass/fail table")
    verify.add_argument("--out", default="flopslope-verify", help="output directory")
    verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
