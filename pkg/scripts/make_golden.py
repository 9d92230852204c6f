"""Regenerate tests/golden/reports_v1.json from the 64 representatives.

Run only after an intended change to the report format; review the diff.
"""
import json
from pathlib import Path

from quadmaps.classes import REPRESENTATIVES, representative
from quadmaps.field import FieldPolicy
from quadmaps.report import build_report

OUT = Path(__file__).resolve().parent.parent / "tests" / "golden" / "reports_v1.json"


def main():
    docs = {}
    for k in range(1, 65):
        d = build_report(representative(k), FieldPolicy(), list(REPRESENTATIVES[k])).to_dict()
        d.pop("timing")
        docs[str(k)] = d
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(docs, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
    print(f"wrote {OUT} ({len(docs)} reports)")


if __name__ == "__main__":
    main()
