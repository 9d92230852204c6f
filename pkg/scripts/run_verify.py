"""Run every verification suite and print a table; errata are listed apart.

Usage: python3 scripts/run_verify.py [--only suite,suite] [--out report.json]
"""
import argparse
import json
import sys

from quadmaps.checks import SUITES, run_suites


def main():
    ap = argparse.ArgumentParser(description="verification suites")
    ap.add_argument("--only", help=f"comma separated, from {', '.join(SUITES)}")
    ap.add_argument("--out")
    args = ap.parse_args()
    only = args.only.split(",") if args.only else None
    run = run_suites(only)
    errata = [c for c in run.checks if c.erratum]
    for c in run.checks:
        if not c.erratum:
            print(f"{'PASS' if c.ok else 'FAIL'} {c.suite:<12} {c.name:<40} {c.detail}")
    if errata:
        print("\nprinted statements checked as errata (expected not to hold):")
        for c in errata:
            print(f"  {'holds' if c.ok else 'fails'}  {c.suite:<12} {c.name}")
    print("\ntiming:", ", ".join(f"{k} {v:.1f}s" for k, v in run.timing.items()))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(run.to_dict(), fh, indent=1)
    sys.exit(0 if run.ok else 1)


if __name__ == "__main__":
    main()
