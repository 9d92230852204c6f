"""Verification suites used by ``verify-paper`` and the acceptance tests."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from .classes import (AffineClass, EXCEPTIONAL_AB, FAMILY_ITEMS, H0, PRINTED_PARAMS,
                      family1_form, representative)
from .maps import verify_witness


@dataclass
class Check:
    suite: str
    name: str
    ok: bool
    detail: str = ""
    erratum: bool = False          # informational: a printed statement that does not hold

    def to_dict(self) -> dict:
        d = {"suite": self.suite, "name": self.name, "ok": self.ok, "detail": self.detail}
        if self.erratum:
            d["erratum"] = True
        return d


def expected_class(k: int) -> AffineClass:
    if k in FAMILY_ITEMS:
        return AffineClass.family(k, *PRINTED_PARAMS[k])
    return AffineClass.discrete(k)


def suite_resultants() -> List[Check]:
    from .census import verify_resultant_identities

    out = []
    for r in verify_resultant_identities():
        out.append(Check("resultants", r.name, r.holds,
                         f"sign {r.sign:+d}" if r.holds else "mismatch"))
    return out


def suite_idempotence() -> List[Check]:
    from .reduce import reduce_map

    out = []
    for k in range(1, 65):
        F = representative(k)
        r = reduce_map(F)
        want = expected_class(k)
        ok = r.cls is not None and r.cls.same_class(want) and r.cls.params == want.params
        wok = not r.certificate_only and verify_witness(F, r.canonical, r.steps)
        out.append(Check("idempotence", f"item {k}", ok and wok,
                         f"{r.cls} ({len(r.steps)} steps)" if r.cls else "no class"))
    return out


# counts are (cusps, double cusps, nodes)
CENSUS_MATRIX = {
    1: (6, 0, 4), 2: (4, 1, 3), 3: (2, 2, 2), 8: (4, 0, 2), 9: (2, 1, 1),
    16: (3, 0, 0), 22: (2, 0, 1), 23: (0, 1, 0),
}
CUSPS_ONLY = {10: 1, 27: 1}
FAMILY4 = {Fraction(1, 4): (3, 3), 1: (2, 2)}


def suite_census() -> List[Check]:
    from .census import census_discrete, census_of, family4_structure

    out = []
    for k, want in CENSUS_MATRIX.items():
        got = census_of(expected_class(k)).counts()
        out.append(Check("census", f"item {k}", got == want, f"{got} expected {want}"))
    for k, want in CUSPS_ONLY.items():
        got = census_discrete(k).cusps
        out.append(Check("census", f"item {k} cusps", got == want, f"{got} expected {want}"))
    for A, (c, n) in FAMILY4.items():
        cen = family4_structure(A)
        got = (cen.cusps, cen.intersections)
        out.append(Check("census", f"family4 A={A}", got == (c, n),
                         f"cusps, intersections {got} expected {(c, n)}"))
    # item 5 by the component engine
    cen = census_discrete(5)
    got = (cen.cusps, cen.intersections)
    out.append(Check("census", "item 5 engine", got == (2, 2), f"{got}"))
    cen = census_discrete(22)
    roots = _rational_roots(cen.cusp_poly)
    out.append(Check("census", "item 22 cusp parameters", roots == {0, Fraction(-1, 2)},
                     f"{sorted(roots)}"))
    return out


def _rational_roots(p) -> set:
    from .classes import canon_scalar
    from .field import gaussian_rational_roots

    return {canon_scalar(r) for r in (gaussian_rational_roots(p) if p else [])}


def suite_structure() -> List[Check]:
    from .census import verify_class_structure

    out = []
    for k in range(1, 65):
        rep = verify_class_structure(expected_class(k))
        out.append(Check("structure", f"item {k}", rep.ok, "; ".join(rep.failures())))
    return out


def suite_exceptional() -> List[Check]:
    from .reduce import reduce_map

    out = [Check("exceptional", "H0(1/16,-1/16) = 0", H0(Fraction(1, 16), Fraction(-1, 16)) == 0),
           Check("exceptional", "H0(1,1) = 153", H0(1, 1) == 153, str(H0(1, 1)))]
    for A, B in EXCEPTIONAL_AB:
        F = family1_form(Fraction(A), Fraction(B))
        r = reduce_map(F)
        ok = r.cls == AffineClass.discrete(3) and verify_witness(F, r.canonical, r.steps)
        out.append(Check("exceptional", f"({A},{B}) -> Discrete(3)", ok, str(r.cls)))
    return out


def suite_identities() -> List[Check]:
    from . import identities as idn

    out = []
    for ident in idn.ALL:
        out.append(Check("identities", ident.name, ident.holds(), ident.note))
        if ident.printed is not None:
            out.append(Check("identities", ident.name + " (printed form)",
                             ident.holds(ident.printed), "printed right-hand side", erratum=True))
    out.append(Check("identities", idn.EXC_1.name + " (printed constant +3)",
                     idn.exceptional_printed_holds(), "printed target map", erratum=True))
    return out


def suite_merges() -> List[Check]:
    from .topo import f28_printed_sign_fails, verify_merge_witnesses

    out = [Check("merges", r["name"], r["verified"], "; ".join(r["notes"]))
           for r in verify_merge_witnesses()]
    out.append(Check("merges", "F28 chain with printed +z^3", not f28_printed_sign_fails(),
                     "printed sign", erratum=True))
    return out


SUITES: Dict[str, Callable[[], List[Check]]] = {
    "resultants": suite_resultants,
    "idempotence": suite_idempotence,
    "census": suite_census,
    "structure": suite_structure,
    "exceptional": suite_exceptional,
    "identities": suite_identities,
    "merges": suite_merges,
}


@dataclass
class SuiteRun:
    checks: List[Check] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks if not c.erratum)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_dict() for c in self.checks],
                "timing": self.timing}


def run_suites(only: Optional[List[str]] = None) -> SuiteRun:
    run = SuiteRun()
    for name in (only or list(SUITES)):
        t = time.perf_counter()
        run.checks.extend(SUITES[name]())
        run.timing[name] = round(time.perf_counter() - t, 3)
    return run
