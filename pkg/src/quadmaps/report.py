"""JSON reports (schema ``report.v1``) and exact field-literal serialization.

Field literals are trees: a Gaussian rational is ``{"re": "1/2", "im": "0"}``,
an element a + b*sqrt(r) of a quadratic level is ``{"a": .., "b": .., "radicand": ..}``
and an element of the cubic level is ``{"cubic": [c0, c1, c2], "coords": [..]}``
(coordinates in the basis 1, w, w^2 with w^3 + c2 w^2 + c1 w + c0 = 0).
"""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from .field import BASE, FieldPolicy, TowerCtx, TowerElem
from .poly import _norm

SCHEMA = "report.v1"


class ReportError(ValueError):
    pass


# ---------------------------------------------------------------------------
# literals


def _frac_text(r) -> str:
    return str(Fraction(r))


def literal_to_json(v) -> dict:
    if isinstance(v, bool):
        raise ReportError("boolean is not a field literal")
    if isinstance(v, (int, Fraction)):
        return {"re": _frac_text(v), "im": "0"}
    if not isinstance(v, TowerElem):
        raise ReportError(f"not a field literal: {v!r}")
    e = v.descended()
    ctx = e.ctx
    if ctx.parent is None:
        return {"re": _frac_text(e.c[0]), "im": _frac_text(e.c[1])}
    par = ctx.parent
    if ctx.kind == "sqrt":
        a, b = e.c
        return {"a": literal_to_json(TowerElem(par, a)), "b": literal_to_json(TowerElem(par, b)),
                "radicand": literal_to_json(TowerElem(par, ctx.data))}
    return {"cubic": [literal_to_json(TowerElem(par, c)) for c in ctx.data],
            "coords": [literal_to_json(TowerElem(par, c)) for c in e.c]}


def _deepest(elems: List[TowerElem]) -> TowerCtx:
    ctx = BASE
    for x in elems:
        if x.ctx.depth > ctx.depth:
            ctx = x.ctx
    for x in elems:
        x.lift(ctx)     # raises IncompatibleTowers for unrelated levels
    return ctx


def literal_from_json(d, session=None):
    """Inverse of :func:`literal_to_json`; plain ints and strings are accepted too."""
    if isinstance(d, bool):
        raise ReportError("boolean is not a field literal")
    if isinstance(d, int):
        return d
    if isinstance(d, str):
        from .parse import parse_scalar
        return parse_scalar(d, session)
    if not isinstance(d, dict):
        raise ReportError(f"bad literal {d!r}")
    try:
        if set(d) <= {"re", "im"} and "re" in d:
            re_, im = Fraction(str(d["re"])), Fraction(str(d.get("im", "0")))
            return _norm(re_) if im == 0 else TowerElem.gauss(re_, im)
        if set(d) == {"a", "b", "radicand"}:
            a, b, r = (TowerElem.coerce(literal_from_json(d[k], session))
                       for k in ("a", "b", "radicand"))
            par = _deepest([a, b, r])
            ctx = TowerCtx(par, "sqrt", r.lift(par).c)
            out = a.lift(par).lift(ctx) + b.lift(par).lift(ctx) * ctx.gen()
        elif set(d) == {"cubic", "coords"}:
            cs = [TowerElem.coerce(literal_from_json(c, session)).lift(BASE).c for c in d["cubic"]]
            ctx = TowerCtx(BASE, "cubic", tuple(cs))
            w = ctx.gen()
            out = TowerElem.coerce(0, ctx)
            for k, c in enumerate(d["coords"]):
                out = out + TowerElem.coerce(literal_from_json(c, session)).lift(ctx) * w ** k
        else:
            raise ReportError(f"bad literal keys {sorted(d)}")
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ReportError(f"bad literal {d!r}: {exc}") from exc
    if session is not None:
        out = session.absorb(out)
    return _norm(out.descended()) if out.is_base() else out


# ---------------------------------------------------------------------------
# witness steps


def _matrix(M) -> List[List[dict]]:
    return [[literal_to_json(v) for v in row] for row in M]


def step_to_json(step) -> dict:
    return {"label": step.label,
            "source": {"kind": "affine", "matrix": _matrix(step.phi.L),
                       "translation": [literal_to_json(v) for v in step.phi.t],
                       "text": [str(e) for e in step.phi.exprs()]},
            "target": {"kind": "affine", "matrix": _matrix(step.psi.N),
                       "translation": [literal_to_json(v) for v in step.psi.s],
                       "text": [str(e) for e in step.psi.exprs()]}}


def step_from_json(d: dict, session=None):
    from .maps import SourceAut, Step, TargetAut

    def mat(m):
        return [[literal_from_json(v, session) for v in row] for row in m]

    def vec(v):
        return [literal_from_json(x, session) for x in v]

    phi = SourceAut(mat(d["source"]["matrix"]), vec(d["source"]["translation"]))
    psi = TargetAut(mat(d["target"]["matrix"]), vec(d["target"]["translation"]))
    return Step(phi, psi, d.get("label", ""))


# ---------------------------------------------------------------------------
# report document


@dataclass
class ReportDoc:
    input: Dict[str, Any]
    affine_class: Optional[Dict[str, Any]]
    topo_class: Optional[Dict[str, Any]]
    witness: Dict[str, Any]
    census: Optional[Dict[str, Any]]
    verification: Dict[str, Any]
    field_policy: Dict[str, Any]
    timing: Dict[str, float] = field(default_factory=dict)
    schema: str = SCHEMA

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "ReportDoc":
        if d.get("schema") != SCHEMA:
            raise ReportError(f"unsupported schema {d.get('schema')!r}")
        keys = {f for f in cls.__dataclass_fields__}
        missing = keys - set(d)
        if missing:
            raise ReportError(f"missing fields {sorted(missing)}")
        return cls(**{k: d[k] for k in keys})

    @classmethod
    def from_json(cls, text: str) -> "ReportDoc":
        return cls.from_dict(json.loads(text))

    @property
    def certificate_only(self) -> bool:
        return bool(self.witness.get("certificate_only"))


def policy_dict(policy: FieldPolicy) -> dict:
    return {"name": "full" if policy.allow_cubic else "no-cubic",
            "max_depth": policy.max_depth, "allow_cubic": policy.allow_cubic}


def input_echo(F, exprs=None) -> dict:
    f, g = F.exprs()
    d = {"f": f, "g": g,
         "coefficients": {"f": [literal_to_json(v) for v in F.f],
                          "g": [literal_to_json(v) for v in F.g]}}
    if exprs is not None:
        d["expressions"] = list(exprs)
    return d


def build_report(F, policy: FieldPolicy, exprs=None, with_census: bool = True,
                 with_structure: bool = True, seed: int = 0) -> ReportDoc:
    """Run the full pipeline on F and assemble the report."""
    from .census import CensusError, census_generic, census_of, verify_class_structure
    from .maps import verify_witness
    from .reduce import reduce_map
    from .topo import topo_index

    t0 = time.perf_counter()
    red = reduce_map(F, policy)
    t1 = time.perf_counter()
    cls = red.cls
    witness_ok = None
    if not red.certificate_only:
        witness_ok = verify_witness(F, red.canonical, red.steps)
    t2 = time.perf_counter()
    census = None
    census_ok = None
    structure_ok = None
    notes: List[str] = []
    if cls is not None and with_census:
        try:
            cen = census_of(cls)
            census = cen.to_dict()
            census["counts"] = list(cen.counts())
            census_ok = True
            if cls.is_family:
                gen = census_generic(cls)
                census_ok = (gen.counts(), gen.intersections) == (cen.counts(), cen.intersections)
        except CensusError as exc:
            notes.append(f"census unavailable: {exc}")
            census_ok = False
    t3 = time.perf_counter()
    if cls is not None and with_structure:
        try:
            structure_ok = verify_class_structure(cls, seed).ok
        except Exception as exc:  # structure check must never crash a report
            notes.append(f"structure check failed to run: {exc}")
            structure_ok = False
    t4 = time.perf_counter()
    witness = {"direction": "steps map the input to the canonical form",
               "certificate_only": red.certificate_only,
               "top_type": f"T{red.top_type}",
               "tower": red.tower,
               "steps": [step_to_json(s) for s in red.steps],
               "canonical": list(red.canonical.exprs()) if red.canonical is not None else None}
    if red.note:
        witness["note"] = red.note
    verification = {"witness_ok": witness_ok, "census_ok": census_ok,
                    "structure_ok": structure_ok}
    if notes:
        verification["notes"] = notes
    return ReportDoc(
        input=input_echo(F, exprs),
        affine_class=cls.to_dict() if cls is not None else None,
        topo_class=topo_index(cls).to_dict() if cls is not None else None,
        witness=witness, census=census, verification=verification,
        field_policy=policy_dict(policy),
        timing={"reduce_s": round(t1 - t0, 6), "verify_s": round(t2 - t1, 6),
                "census_s": round(t3 - t2, 6), "structure_s": round(t4 - t3, 6),
                "total_s": round(t4 - t0, 6)})
