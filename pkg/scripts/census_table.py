"""Print the census of all 64 catalogue items next to their topological class.

Usage: python3 scripts/census_table.py [--json]
"""
import argparse
import json

from quadmaps.census import census_of
from quadmaps.checks import expected_class
from quadmaps.topo import topo_index


def rows():
    for k in range(1, 65):
        cls = expected_class(k)
        c = census_of(cls)
        yield {"item": k, "class": cls.label(), "topo": str(topo_index(cls)),
               "critical_set": c.critical_set or "curves",
               "cusps": c.cusps, "double_cusps": c.double_cusps, "nodes": c.nodes,
               "intersections": c.intersections, "components": len(c.components)}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    data = list(rows())
    if args.json:
        print(json.dumps(data, indent=1))
        return
    head = f"{'item':>4} {'class':<28} {'topo':>5} {'crit':<20} cusp dbl node int comp"
    print(head)
    print("-" * len(head))
    for r in data:
        def n(v):
            return "-" if v is None else str(v)
        print(f"{r['item']:>4} {r['class']:<28} {r['topo']:>5} {r['critical_set']:<20} "
              f"{n(r['cusps']):>4} {n(r['double_cusps']):>3} {n(r['nodes']):>4} "
              f"{n(r['intersections']):>3} {r['components']:>4}")


if __name__ == "__main__":
    main()
