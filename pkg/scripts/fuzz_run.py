"""Random affine conjugation stability over the default targets.

Every discrete representative plus the family samples is conjugated by random
affine automorphisms with Gaussian-integer entries, reclassified and its
witness chain verified.

Usage: python3 scripts/fuzz_run.py [--seed S] [--count N] [--out report.json]
"""
import argparse
import json
import sys

from quadmaps.fuzz import default_targets, fuzz


def main():
    ap = argparse.ArgumentParser(description="random conjugation stability")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--count", type=int, default=100, help="trials per target")
    ap.add_argument("--out", help="write the JSON report here")
    args = ap.parse_args()
    out = fuzz(args.seed, args.count, default_targets())
    for name, row in out["per_target"].items():
        mark = "ok " if row["stable"] == row["trials"] else "BAD"
        print(f"{mark} {name:<16} {row['expected']:<28} {row['stable']}/{row['trials']}")
    print(f"{out['trials']} trials, {out['failures']} failures, {out['elapsed_s']:.0f}s")
    for f in out["failing"]:
        print("  ", f)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(out, fh, indent=1)
    sys.exit(1 if out["failures"] else 0)


if __name__ == "__main__":
    main()
