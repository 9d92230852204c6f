"""Command line: classify | census | reduce | verify-paper | fuzz.

Exit codes: 0 success, 1 a verification failed, 2 usage or parse error,
3 classified without a witness under the chosen field policy.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .field import FieldError, FieldPolicy
from .maps import MapError
from .parse import ParseError, parse_coeff_map, parse_map
from .report import ReportError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CERT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _policy(name: str) -> FieldPolicy:
    return FieldPolicy(allow_cubic=(name == "full"))


def _read_input(args):
    if args.expr is not None and args.coeffs is not None:
        raise UsageError("give either -e or -c, not both")
    if args.expr is not None:
        return parse_map(*args.expr), list(args.expr)
    if args.coeffs is not None:
        text = args.coeffs
        if os.path.exists(text):
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.pos, text) from exc
        if isinstance(data, dict):
            if set(data) != {"f", "g"}:
                raise ParseError("coefficient object needs keys 'f' and 'g'", 0)
            data = [data["f"], data["g"]]
        if not isinstance(data, list) or len(data) != 2:
            raise ParseError("coefficient form needs two lists of length 10", 0)
        return parse_coeff_map(data[0], data[1]), None
    raise UsageError("an input map is required (-e F G or -c JSON)")


def _emit(obj, as_json: bool, text: str):
    if as_json:
        print(json.dumps(obj, indent=2, ensure_ascii=False))
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args) -> int:
    from .report import build_report

    F, exprs = _read_input(args)
    rep = build_report(F, _policy(args.policy), exprs, seed=args.seed)
    d = rep.to_dict()
    lines = [f"input        ({d['input']['f']}, {d['input']['g']})"]
    ac = d["affine_class"]
    lines.append(f"affine class {ac['label'] if ac else 'unknown'}")
    if d["topo_class"]:
        t = d["topo_class"]
        lines.append(f"topo class   {t['index']}{t['letter'] or ''}")
    w = d["witness"]
    if w["certificate_only"]:
        lines.append(f"witness      none under policy {d['field_policy']['name']} ({w.get('note', '')})")
    else:
        lines.append(f"witness      {len(w['steps'])} steps, tower {w['tower']}")
    if d["census"] and not d["census"]["applicable"]:
        lines.append(f"census       not applicable, critical set {d['census']['critical_set']}")
    elif d["census"]:
        c = d["census"]
        lines.append(f"census       {c['cusps']} cusps, {c['double_cusps']} double cusps, "
                     f"{c['nodes']} nodes; critical set {c['critical_set']}")
    v = d["verification"]
    lines.append("verified     " + ", ".join(f"{k}={v[k]}" for k in
                                            ("witness_ok", "census_ok", "structure_ok")))
    _emit(d, args.json, "\n".join(lines))
    if rep.certificate_only:
        return EXIT_CERT
    return EXIT_OK if v["witness_ok"] is not False else EXIT_FAIL


def cmd_census(args) -> int:
    from .census import census_of
    from .reduce import reduce_map

    if args.item is not None:
        from .checks import expected_class
        if not 1 <= args.item <= 64:
            raise UsageError("--item must be in 1..64")
        cls = expected_class(args.item)
    else:
        F, _ = _read_input(args)
        cls = reduce_map(F, _policy(args.policy), orbit=False).cls
        if cls is None:
            print("class could not be determined under this field policy", file=sys.stderr)
            return EXIT_CERT
    cen = census_of(cls)
    d = {"schema": "report.v1", "affine_class": cls.to_dict(), "census": cen.to_dict()}
    lines = [f"{cls.label()}: {cen.cusps} cusps, {cen.double_cusps} double cusps, "
             f"{cen.nodes} nodes, {cen.intersections} image intersections"]
    for comp in cen.components:
        lines.append(f"  {comp['name']}: {comp['kind']} ({comp.get('restriction', '')})")
    if cen.cusp_poly:
        lines.append(f"  cusp polynomial {d['census']['cusp_polynomial']}")
    if cen.node_poly:
        lines.append(f"  node polynomial {d['census']['node_polynomial']}")
    _emit(d, args.json, "\n".join(lines))
    return EXIT_OK


def cmd_reduce(args) -> int:
    from .maps import verify_witness
    from .reduce import reduce_map
    from .report import step_to_json

    F, _ = _read_input(args)
    r = reduce_map(F, _policy(args.policy))
    ok = None if r.certificate_only else verify_witness(F, r.canonical, r.steps)
    d = {"schema": "report.v1", "affine_class": r.cls.to_dict() if r.cls else None,
         "certificate_only": r.certificate_only, "witness_ok": ok,
         "canonical": list(r.canonical.exprs()) if r.canonical is not None else None,
         "steps": [step_to_json(s) for s in r.steps]}
    lines = [f"{r.cls.label() if r.cls else 'unknown'}"]
    for i, s in enumerate(r.steps, 1):
        src = ", ".join(str(e) for e in s.phi.exprs())
        tgt = ", ".join(str(e) for e in s.psi.exprs())
        lines.append(f"{i:3d}. {s.label or '-'}: source ({src}), target ({tgt})")
    if r.canonical is not None:
        lines.append("canonical " + "(" + ", ".join(r.canonical.exprs()) + ")")
    if r.certificate_only:
        lines.append("no witness: " + r.note)
    _emit(d, args.json, "\n".join(lines))
    if r.certificate_only:
        return EXIT_CERT
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_paper(args) -> int:
    from .checks import SUITES, run_suites

    only = None
    if args.only:
        only = [s.strip() for s in args.only.split(",") if s.strip()]
        bad = [s for s in only if s not in SUITES]
        if bad:
            raise UsageError(f"unknown suite(s) {bad}; choose from {sorted(SUITES)}")
    run = run_suites(only)
    lines = []
    for c in run.checks:
        tag = "ERRATUM" if c.erratum else ("PASS" if c.ok else "FAIL")
        lines.append(f"[{tag:7}] {c.suite:12} {c.name}" + (f"  ({c.detail})" if c.detail else ""))
    lines.append(f"{'all checks passed' if run.ok else 'FAILURES'}; timing {run.timing}")
    _emit(run.to_dict(), args.json, "\n".join(lines))
    return EXIT_OK if run.ok else EXIT_FAIL


def cmd_fuzz(args) -> int:
    from .fuzz import fuzz

    if args.count < 1:
        raise UsageError("--count must be at least 1")
    targets = None
    if args.target:
        from .fuzz import parse_target
        try:
            targets = [parse_target(t) for t in args.target.split(",")]
        except (ValueError, ParseError) as exc:
            raise UsageError(str(exc)) from exc
    summary = fuzz(args.seed, args.count, targets, _policy(args.policy))
    lines = [f"{summary['trials']} trials, {summary['failures']} failures, "
             f"{summary['elapsed_s']} s"]
    for name, st in summary["per_target"].items():
        lines.append(f"  {name}: {st['stable']}/{st['trials']} stable")
    for f in summary["failing"][:20]:
        lines.append(f"  FAIL {f['target']} seed={f['seed']}: {f['reason']}")
    _emit(summary, args.json, "\n".join(lines))
    return EXIT_OK if summary["failures"] == 0 else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing


def _add_input(p):
    p.add_argument("-e", "--expr", nargs=2, metavar=("F", "G"), help="two polynomials in x, y, z")
    p.add_argument("-c", "--coeffs", metavar="JSON",
                   help="coefficient form: JSON text or file, two lists of 10 literals")


def _add_common(p):
    p.add_argument("--json", action="store_true", help="emit a JSON document")
    p.add_argument("--policy", choices=("full", "no-cubic"), default="full",
                   help="field policy (default: full)")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quadmaps", description="Exact classifier for quadratic maps C^3 -> C^2.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("classify", help="affine and topological class with witness and census")
    _add_input(p)
    _add_common(p)
    p.set_defaults(fn=cmd_classify)
    p = sub.add_parser("census", help="singularity census of a map or of a catalogue item")
    _add_input(p)
    _add_common(p)
    p.add_argument("--item", type=int, help="catalogue item 1..64 instead of an input map")
    p.set_defaults(fn=cmd_census)
    p = sub.add_parser("reduce", help="witness chain to the canonical form")
    _add_input(p)
    _add_common(p)
    p.set_defaults(fn=cmd_reduce)
    p = sub.add_parser("verify-paper", help="run the verification suites")
    _add_common(p)
    p.add_argument("--only", help="comma separated suites")
    p.set_defaults(fn=cmd_verify_paper)
    p = sub.add_parser("fuzz", help="random conjugation stability")
    _add_common(p)
    p.add_argument("--count", type=int, default=10, help="trials per target")
    p.add_argument("--target", help="comma separated targets, e.g. 34,F1(1;1),F8(1+i)")
    p.set_defaults(fn=cmd_fuzz)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc.pretty()}", file=sys.stderr)
        return EXIT_USAGE
    except (MapError, ReportError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FieldError as exc:
        print(f"field policy: {exc}", file=sys.stderr)
        return EXIT_CERT


if __name__ == "__main__":
    sys.exit(main())
