"""Singularity census: critical components, cusps, double cusps, nodes.

Each class carries a table of critical-set components.  A curve component is
given by a rational parametrization (X(t), Y(t), Z(t)) / d(t) together with
implicit equations; surface components by a single equation.  Counts are
derived from the parametrizations by gcd, squarefree decomposition and
resultant elimination:

* cusps: common roots of the derivative numerators of F o phi, simple roots
  give cusps and double roots give double cusps (points on other components
  are excluded);
* nodes: Res_s of the divided differences (F o phi(t) - F o phi(s)) / (t - s),
  with cusp, pole and leading-coefficient roots removed; the remaining roots
  pair up, two per node;
* restriction behaviour: the size of a generic fibre of t -> F o phi(t).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .classes import AffineClass, H0, REPRESENTATIVES, representative
from .field import I, Session, TowerElem
from .maps import QuadMap
from .parse import parse_poly
from .poly import (Poly, _norm, resultant, u_add, u_deriv, u_divmod, u_eval, u_gcd, u_monic,
                   u_mul, u_remove_common, u_scale, u_squarefree_decomposition,
                   u_squarefree_part, u_sub, u_trim)

XYZ = ("x", "y", "z")


class CensusError(ValueError):
    pass


class ParamOutOfDomain(CensusError):
    pass


class StructureMismatch(CensusError):
    pass


# ---------------------------------------------------------------------------
# components


@dataclass
class Component:
    name: str
    kind: str
    dim: int
    equations: List[Poly]
    param: Optional[Tuple[list, list, list, list]] = None   # X, Y, Z, d in t
    mult: int = 1
    claimed: Optional[str] = None        # stated restriction behaviour
    topo: str = ""                       # C, C*, cubic, plane, ...

    def to_dict(self) -> dict:
        d = {"name": self.name, "kind": self.kind, "dim": self.dim, "multiplicity": self.mult,
             "equations": [str(e) for e in self.equations]}
        if self.param is not None:
            X, Y, Z, den = self.param
            d["parametrization"] = [str(Poly.from_univariate(c, "t")) for c in (X, Y, Z)]
            d["denominator"] = str(Poly.from_univariate(den, "t"))
        return d


def _tp(s) -> list:
    if isinstance(s, Poly):
        return s.scalar_coeffs("t") if s.terms else []
    if isinstance(s, list):
        return u_trim(s)
    return parse_poly(str(s), ("t",)).scalar_coeffs("t") if str(s).strip() != "0" else []


def _eqs(*texts) -> List[Poly]:
    return [parse_poly(s) for s in texts]


def curve(name, kind, eqs, X, Y, Z, d="1", claimed=None, mult=1, topo="C", dim=1) -> Component:
    return Component(name, kind, dim, _eqs(*eqs) if eqs and isinstance(eqs[0], str) else list(eqs),
                     tuple(_tp(v) for v in (X, Y, Z, d)), mult, claimed, topo)


def surface(name, kind, eq, claimed=None, mult=1) -> Component:
    return Component(name, kind, 2, _eqs(eq), None, mult, claimed, "plane")


# Components of the critical set for each discrete representative.  ``claimed``
# is the restriction behaviour (injective / 2:1 / constant) or, for surfaces,
# the dimension of the image (point / curve).
def _table() -> Dict[int, List[Component]]:
    T: Dict[int, List[Component]] = {}
    T[3] = [curve("C", "cubic", ["4*x*y-1", "2*x*(z+1)-z", "2*y*z-(z+1)"],
                  "t^2", "(t+1)^2", "2*t^2*(t+1)", "2*t*(t+1)", "injective", topo="cubic")]
    T[5] = [curve("C1", "hyperbola", ["x*y-1", "z"], "t^2", "1", "0", "t", "injective", topo="C*"),
            curve("C2", "line", ["x-1", "y-1"], "1", "1", "t", claimed="2:1")]
    T[6] = [curve("C1", "line", ["x", "y-1"], "0", "1", "t", claimed="2:1"),
            curve("C2", "line", ["x", "z"], "0", "t", "0", claimed="injective"),
            curve("C3", "line", ["y", "z"], "t", "0", "0", claimed="2:1")]
    T[7] = [curve("C1", "line", ["x", "y"], "0", "0", "t", claimed="2:1"),
            curve("C2", "line", ["x", "z"], "0", "t", "0", claimed="2:1"),
            curve("C3", "line", ["y", "z"], "t", "0", "0", claimed="2:1")]
    A0 = Session().sqrt(4 * I)
    T[9] = _family8_components(A0)
    T[10] = [curve("C1", "parabola", ["x", "y-z*(z+1)"], "0", "t^2+t", "t", claimed="injective"),
             curve("C2", "line", ["y", "z+1"], "t", "0", "-1", claimed="2:1")]
    T[11] = [curve("C1", "hyperbola", ["x*y+1", "z+1"], "t^2", "-1", "-t", "t", "injective",
                   topo="C*"),
             curve("C2", "line", ["x", "z"], "0", "t", "0", claimed="injective")]
    T[12] = [curve("C1", "line", ["x", "z"], "0", "t", "0", claimed="injective"),
             curve("C2", "line", ["x", "z+1"], "0", "t", "-1", claimed="constant"),
             curve("C3", "line", ["y", "z+1"], "t", "0", "-1", claimed="2:1")]
    T[13] = [curve("C1", "parabola", ["x", "y-z^2"], "0", "t^2", "t", claimed="injective"),
             curve("C2", "line", ["y", "z"], "t", "0", "0", claimed="2:1")]
    T[14] = [curve("C1", "double line", ["x", "z"], "0", "t", "0", claimed="constant", mult=2),
             curve("C2", "line", ["y", "z"], "t", "0", "0", claimed="injective")]
    T[15] = [curve("C1", "double line", ["x", "z"], "0", "t", "0", claimed="constant", mult=2),
             curve("C2", "line", ["y", "z"], "t", "0", "0", claimed="2:1")]
    T[16] = [curve("C", "hyperbola", ["x*z-1", "y"], "t^2", "0", "1", "t", "injective", topo="C*")]
    # the printed text swaps the two restriction behaviours
    T[17] = [curve("C1", "line", ["x", "y"], "0", "0", "t", claimed="2:1"),
             curve("C2", "line", ["y", "z"], "t", "0", "0", claimed="injective")]
    T[18] = [curve("C", "hyperbola", ["x", "y*z-1"], "0", "t^2", "1", "t", "injective", topo="C*")]
    T[19] = [curve("C1", "line", ["x", "y"], "0", "0", "t", claimed="2:1"),
             curve("C2", "line", ["x", "z"], "0", "t", "0", claimed="constant")]
    T[20] = [curve("C", "line", ["x", "y"], "0", "0", "t", claimed="injective"),
             surface("H", "plane", "z", claimed="curve")]
    T[21] = [curve("C", "line", ["x", "y"], "0", "0", "t", claimed="2:1"),
             surface("H", "plane", "z", claimed="curve")]
    T[22] = _t4_components(0, 0)
    T[23] = _t4_components(0, Fraction(3, 16))
    T[24] = [curve("C1", "parabola", ["y", "x^2-z"], "t", "0", "t^2", claimed="injective"),
             curve("C2", "line", ["x-1", "y+1"], "1", "-1", "t", claimed="injective")]
    T[25] = [curve("C1", "line", ["x", "y"], "0", "0", "t", claimed="constant"),
             curve("C2", "double line", ["x+1", "y"], "-1", "0", "t", claimed="constant", mult=2)]
    T[26] = [curve("C", "triple line", ["x", "y"], "0", "0", "t", claimed="constant", mult=3)]
    T[27] = [curve("C", "parabola", ["x", "y-z^2"], "0", "t^2", "t", claimed="injective")]
    T[28] = [curve("C", "line", ["y", "z"], "t", "0", "0", claimed="injective")]
    T[29] = [curve("C", "line", ["x", "z"], "0", "t", "0", claimed="constant"),
             surface("H", "plane", "z+1", claimed="curve")]
    T[30] = [surface("H", "plane", "z", claimed="curve")]
    T[31] = [curve("C", "line", ["x", "y"], "0", "0", "t", claimed="injective")]
    T[33] = [surface("H", "plane", "y", claimed="curve")]
    T[34] = [curve("C", "cylinder", ["x*y-1"], "t^2", "1", "0", "t", "injective", topo="C* x C",
                   dim=2)]
    T[35] = [surface("H1", "plane", "x", claimed="curve"), surface("H2", "plane", "y", claimed="curve")]
    T[36] = [surface("H1", "plane", "x", claimed="curve"), surface("H2", "plane", "y", claimed="curve")]
    T[37] = [curve("C1", "line", ["x", "y"], "0", "0", "t", claimed="injective"),
             curve("C2", "line", ["y+1", "z"], "t", "-1", "0", claimed="injective")]
    T[38] = [curve("C", "double line", ["y", "z"], "t", "0", "0", claimed="constant", mult=2)]
    T[39] = [surface("H", "plane", "y", claimed="point")]
    T[40] = [curve("C", "line", ["x", "y"], "0", "0", "t", claimed="injective")]
    T[42] = [surface("H", "plane", "y", claimed="curve")]
    T[43] = [curve("C", "cylinder", ["x-y^2"], "t^2", "t", "0", claimed="injective", topo="C x C",
                   dim=2)]
    T[44] = [surface("H1", "plane", "y", claimed="point"), surface("H2", "plane", "y+1", claimed="curve")]
    T[45] = [surface("H", "double plane", "y", claimed="point", mult=2)]
    T[46] = [curve("C", "line", ["y", "z"], "t", "0", "0", claimed="injective")]
    T[47] = [curve("C", "line", ["x", "y"], "0", "0", "t", claimed="constant")]
    T[49] = [curve("C", "line", ["x", "y"], "0", "0", "t", claimed="injective")]
    T[51] = [surface("H", "plane", "y", claimed="curve")]
    T[53] = [surface("H", "plane", "x", claimed="point")]
    T[57] = [surface("H", "plane", "x", claimed="curve")]
    for k in (32, 41, 50, 52, 56, 58, 62):
        T[k] = []
    return T


EVERYWHERE = (48, 54, 55, 59, 60, 61, 63, 64)
EMPTY = (32, 41, 50, 52, 56, 58, 62)


def _t4_components(A, B) -> List[Component]:
    """phi = (t^2 + A t, t, t^3 + (A+1) t^2 + B t) on (x^2+2yz, y^2+2xy+2Ax+2By+2z)."""
    t = Poly.var("t")
    x_, y_, z_ = (Poly.var(v, XYZ) for v in XYZ)
    eqs = [x_ - y_ * y_ - A * y_, z_ - y_ ** 3 - (A + 1) * y_ * y_ - B * y_]
    return [Component("C", "cubic", 1, eqs,
                      (_tp(t * t + A * t), _tp(t), _tp(t ** 3 + (A + 1) * t * t + B * t), [1]),
                      1, "injective", "C")]


def _family1_components() -> List[Component]:
    return [curve("C", "cubic", ["x*y-1", "x*(z+1)-z", "y*z-(z+1)"],
                  "t^2", "(t+1)^2", "t^2*(t+1)", "t*(t+1)", "injective", topo="cubic")]


def _family4_components() -> List[Component]:
    return [curve("C1", "hyperbola", ["x*y-1", "z"], "t^2", "1", "0", "t", "injective", topo="C*"),
            curve("C2", "line", ["x-1", "y-1"], "1", "1", "t", claimed="2:1")]


def _family8_components(A) -> List[Component]:
    t = Poly.var("t")
    x_, y_, z_ = (Poly.var(v, XYZ) for v in XYZ)
    eqs = [x_ * (z_ + A) - 1, x_ * y_ - z_, y_ - z_ * (z_ + A)]
    den = t + A
    return [Component("C", "cubic", 1, eqs,
                      ([1], _tp((t * t + A * t) * den),
                       _tp(t * den), _tp(den)), 1, "injective", "cubic")]


_TABLE: Optional[Dict[int, List[Component]]] = None


def components_for(cls: AffineClass) -> Optional[List[Component]]:
    """Critical components of the canonical form; None means C(F) = C^3."""
    global _TABLE
    if cls.kind == "family":
        if cls.number in (1, 2):
            return _family1_components()
        if cls.number == 4:
            return _family4_components()
        return _family8_components(cls.params[0])
    if cls.number in EVERYWHERE:
        return None
    if _TABLE is None:
        _TABLE = _table()
    if cls.number == 1 or cls.number == 2:
        return _family1_components()
    return _TABLE[cls.number]


# ---------------------------------------------------------------------------
# minors


def minors(F: QuadMap) -> Tuple[Poly, Poly, Poly]:
    """(m_xy, m_xz, m_yz) with m_uv = f_u g_v - f_v g_u."""
    f, g = F.to_polys()
    fx, fy, fz = (f.diff(v) for v in XYZ)
    gx, gy, gz = (g.diff(v) for v in XYZ)
    return fx * gy - fy * gx, fx * gz - fz * gx, fy * gz - fz * gy


# ---------------------------------------------------------------------------
# parametrized curves


def _homog_eval(coeffs, X, Y, Z, d) -> list:
    """Numerator of h(X/d, Y/d, Z/d) * d^2 for a quadratic h."""
    mons = [u_mul(X, X), u_mul(X, Y), u_mul(X, Z), u_mul(Y, Y), u_mul(Y, Z), u_mul(Z, Z),
            u_mul(X, d), u_mul(Y, d), u_mul(Z, d), u_mul(d, d)]
    out: list = []
    for c, m in zip(coeffs, mons):
        if c != 0 and m:
            out = u_add(out, u_scale(m, c))
    return out


def image_param(F: QuadMap, comp: Component) -> Tuple[list, list, list]:
    """(P1, P2, D): F o phi = (P1/D, P2/D)."""
    X, Y, Z, d = comp.param
    P1, P2, D = _homog_eval(F.f, X, Y, Z, d), _homog_eval(F.g, X, Y, Z, d), u_mul(d, d)
    g = u_gcd(u_gcd(P1, P2), D) if (P1 or P2) else u_monic(D)
    if len(g) > 1:
        P1, P2, D = (u_divmod(p, g)[0] for p in (P1, P2, D))
    return P1, P2, D


def _poly_eval_param(h: Poly, comp: Component) -> list:
    """Numerator of h o phi for an implicit equation h of degree <= 3."""
    X, Y, Z, d = comp.param
    h = h.to_ring(XYZ)
    deg = max(h.degree(), 0)
    out: list = []
    for e, c in h.terms.items():
        term = [c]
        for base, k in zip((X, Y, Z), e):
            for _ in range(k):
                term = u_mul(term, base)
        for _ in range(deg - sum(e)):
            term = u_mul(term, d)
        out = u_add(out, term)
    return out


def _quot_deriv(P: list, D: list) -> list:
    return u_sub(u_mul(u_deriv(P), D), u_mul(P, u_deriv(D)))


def _biv(P: list, D: list) -> Poly:
    """(P(t) D(s) - P(s) D(t)) / (t - s) as a polynomial in t, s."""
    t = Poly.var("t", ("s", "t"))
    s = Poly.var("s", ("s", "t"))
    Pt = Poly.from_univariate(P, "t").to_ring(("s", "t")) if P else Poly(("s", "t"))
    Dt = Poly.from_univariate(D, "t").to_ring(("s", "t"))
    Ps = Poly.from_univariate(P, "s").to_ring(("s", "t")) if P else Poly(("s", "t"))
    Ds = Poly.from_univariate(D, "s").to_ring(("s", "t"))
    num = Pt * Ds - Ps * Dt
    if num.is_zero():
        return num
    return num.exact_div(t - s)


_SAMPLE_T = (Fraction(3, 7), Fraction(-5, 11), Fraction(7, 13), Fraction(11, 17), Fraction(-2, 19))


def restriction_degree(P1: list, P2: list, D: list) -> int:
    """Generic fibre size of t -> (P1/D, P2/D); 0 for a constant map."""
    if not _quot_deriv(P1, D) and not _quot_deriv(P2, D):
        return 0
    for t0 in _SAMPLE_T:
        Dt0 = u_eval(D, t0)
        if Dt0 == 0:
            continue
        h1 = u_sub(u_scale(P1, Dt0), u_scale(D, u_eval(P1, t0)))
        h2 = u_sub(u_scale(P2, Dt0), u_scale(D, u_eval(P2, t0)))
        g = u_gcd(h1, h2)
        if len(u_squarefree_part(g)) == len(g):
            return len(g) - 1
    raise CensusError("no generic sample point")


BEHAVIOUR = {0: "constant", 1: "injective", 2: "2:1"}


def _behaviour(deg: int) -> str:
    return BEHAVIOUR.get(deg, f"{deg}:1")


def _cusp_poly(P1, P2, D, d) -> list:
    g = u_gcd(_quot_deriv(P1, D), _quot_deriv(P2, D))
    if not g:
        return []
    return u_monic(u_remove_common(g, d))


def _on_other(comp: Component, others: Sequence[Component]) -> list:
    """Product of polynomials whose roots t put phi(t) on another component."""
    out = [1]
    for o in others:
        g: list = []
        for h in o.equations:
            g = u_gcd(g, _poly_eval_param(h, comp)) if g else u_monic(_poly_eval_param(h, comp))
            if len(g) == 1:
                break
        if g and len(g) > 1:
            out = u_mul(out, g)
    return out


def _res_s(E1: Poly, E2: Poly) -> list:
    if E1.is_zero() or E2.is_zero():
        return []
    R = resultant(E1, E2, "s")
    return R.scalar_coeffs("t") if R.terms else []


def _lc_s(E: Poly) -> list:
    cs = E.univariate_coeffs("s")
    return cs[-1].scalar_coeffs("t") if cs else []


def _node_poly(P1, P2, D, d, cusp) -> list:
    E1, E2 = _biv(P1, D), _biv(P2, D)
    R = _res_s(E1, E2)
    if not R:
        return []
    spurious = u_gcd(_lc_s(E1), _lc_s(E2)) if (_lc_s(E1) and _lc_s(E2)) else []
    for bad in (d, cusp, spurious):
        if bad and len(bad) > 1:
            R = u_remove_common(R, bad)
    return u_monic(R)


def _distinct(p: list) -> int:
    return max(len(u_squarefree_part(p)) - 1, 0) if p else 0


def _injective_form(P1, P2, D, deg):
    """For a 2:1 polynomial parametrization branched at t0, the injective quotient."""
    if deg == 1:
        return P1, P2, D
    if deg != 2 or len(D) != 1:
        return None
    g = u_gcd(u_deriv(P1), u_deriv(P2))
    if len(g) != 2:
        return None
    t0 = _norm(-g[0])
    out = []
    for P in (P1, P2):
        sh = _shift(P, t0)
        if any(c != 0 for c in sh[1::2]):
            return None
        out.append(sh[0::2])
    return out[0], out[1], D


def _shift(P: list, t0) -> list:
    """P(t + t0)."""
    out: list = []
    for c in reversed(P):
        out = u_add(u_mul(out, [t0, 1]), [c])
    return out


def _pair_intersections(A, B) -> Optional[int]:
    """Points of image(A) on image(B) for injective parametrizations A, B."""
    P1, P2, D = A
    Q1, Q2, E = B
    ring = ("s", "t")

    def lift(p, v):
        return Poly.from_univariate(p, v).to_ring(ring) if p else Poly(ring)

    E1 = lift(P1, "t") * lift(E, "s") - lift(Q1, "s") * lift(D, "t")
    E2 = lift(P2, "t") * lift(E, "s") - lift(Q2, "s") * lift(D, "t")
    if E1.is_zero() and E2.is_zero():
        return None
    if E1.degree("s") <= 0 and E2.degree("s") <= 0:
        return None
    R = _res_s(E1, E2)
    if not R:
        return None
    spurious = u_gcd(_lc_s(E1), _lc_s(E2)) if (_lc_s(E1) and _lc_s(E2)) else []
    for bad in (D, spurious):
        if bad and len(bad) > 1:
            R = u_remove_common(R, bad)
    return _distinct(R)


# ---------------------------------------------------------------------------
# census


@dataclass
class Census:
    cusps: Optional[int] = None
    double_cusps: Optional[int] = None
    nodes: Optional[int] = None
    intersections: Optional[int] = None
    components: List[dict] = field(default_factory=list)
    cusp_poly: Optional[list] = None
    node_poly: Optional[list] = None
    pair_intersections: Dict[str, Optional[int]] = field(default_factory=dict)
    applicable: bool = True
    critical_set: str = ""
    notes: List[str] = field(default_factory=list)

    def counts(self) -> Tuple:
        return (self.cusps or 0, self.double_cusps or 0, self.nodes or 0)

    def signature(self) -> Tuple:
        """Counts and component multiset; comparable across classes."""
        comps = tuple(sorted((c["dim"], c["multiplicity"], c.get("topo", ""),
                              c.get("restriction", ""), c.get("image_cusps_total", 0))
                             for c in self.components))
        status = self.critical_set if self.critical_set in ("everything", "empty") else ""
        return (status, self.cusps or 0, self.double_cusps or 0, self.nodes or 0,
                self.intersections or 0, comps)

    def to_dict(self) -> dict:
        d = {"critical_set": self.critical_set, "cusps": self.cusps,
             "double_cusps": self.double_cusps, "nodes": self.nodes,
             "image_intersections": self.intersections,
             "components": self.components, "applicable": self.applicable}
        if self.cusp_poly:
            d["cusp_polynomial"] = str(Poly.from_univariate(self.cusp_poly, "t"))
        if self.node_poly:
            d["node_polynomial"] = str(Poly.from_univariate(self.node_poly, "t"))
        if self.pair_intersections:
            d["pair_intersections"] = dict(self.pair_intersections)
        if self.notes:
            d["notes"] = list(self.notes)
        return d


def census_from_components(F: QuadMap, comps: Optional[List[Component]]) -> Census:
    if comps is None:
        return Census(applicable=False, critical_set="everything",
                      notes=["critical set is the whole space"])
    if not comps:
        return Census(0, 0, 0, 0, critical_set="empty")
    cen = Census(0, 0, 0, 0)
    images = {}
    cusp_all: list = [1]
    node_all: list = [1]
    for comp in comps:
        info = {"name": comp.name, "kind": comp.kind, "dim": comp.dim,
                "multiplicity": comp.mult, "topo": comp.topo}
        if comp.param is None:
            info["image"] = _surface_image(F, comp)
            info["restriction"] = "image " + info["image"]
            cen.components.append(info)
            continue
        P1, P2, D = image_param(F, comp)
        deg = restriction_degree(P1, P2, D)
        info["restriction"] = _behaviour(deg)
        d = comp.param[3]
        if deg == 1:
            raw = _cusp_poly(P1, P2, D, d)
            others = [o for o in comps if o is not comp]
            cp = raw
            if others and raw:
                cp = u_monic(u_remove_common(raw, _on_other(comp, others)))
            prof = dict(_counts(cp))
            c1, c2 = prof.get(1, 0), prof.get(2, 0)
            if any(m > 2 for m in prof):
                cen.notes.append(f"{comp.name}: cusp polynomial root of multiplicity > 2")
            cen.cusps += c1
            cen.double_cusps += c2
            info["cusps"] = c1
            info["double_cusps"] = c2
            info["image_cusps_total"] = _distinct(raw)
            if cp:
                cusp_all = u_mul(cusp_all, cp)
            nodes_p = _node_poly(P1, P2, D, d, raw)
            nd = _distinct(nodes_p)
            if nd % 2:
                raise CensusError(f"{comp.name}: odd number of node parameters")
            cen.nodes += nd // 2
            info["nodes"] = nd // 2
            if nodes_p:
                node_all = u_mul(node_all, nodes_p)
        inj = _injective_form(P1, P2, D, deg) if deg else None
        if inj is not None:
            images[comp.name] = inj
        cen.components.append(info)
    names = [c.name for c in comps if c.name in images]
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            n = _pair_intersections(images[a], images[b])
            cen.pair_intersections[f"{a}/{b}"] = n
            if n is not None:
                cen.intersections += n
    if len(cusp_all) > 1:
        cen.cusp_poly = cusp_all
    if len(node_all) > 1:
        cen.node_poly = node_all
    cen.critical_set = " + ".join(f"{c.kind}" for c in comps)
    return cen


def _counts(p: list) -> List[Tuple[int, int]]:
    """(multiplicity, number of distinct roots) pairs."""
    out: Dict[int, int] = {}
    if not p or len(p) <= 1:
        return []
    for m, f in u_squarefree_decomposition(p):
        out[m] = out.get(m, 0) + len(f) - 1
    return list(out.items())


def _surface_image(F: QuadMap, comp: Component) -> str:
    """Dimension of F(H) for a plane H, via the rank of the restricted Jacobian."""
    h = comp.equations[0]
    lin = [h.coeff({v: 1}) for v in XYZ]
    k = next(i for i, c in enumerate(lin) if c != 0)
    free = [v for i, v in enumerate(XYZ) if i != k]
    u, v = Poly.var("u", ("u", "v")), Poly.var("v", ("u", "v"))
    sub = {free[0]: u, free[1]: v}
    rest = h.coeff({}) if h.terms else 0
    expr = -rest
    for var_, c in zip(XYZ, lin):
        if var_ in sub:
            expr = sub[var_] * (-c) + expr
    sub[XYZ[k]] = expr * (1 / Fraction(lin[k]) if isinstance(lin[k], int) else 1 / lin[k])
    f, g = F.to_polys()
    fr = f.substitute(sub)
    gr = g.substitute(sub)
    jac = [[fr.diff("u"), fr.diff("v")], [gr.diff("u"), gr.diff("v")]]
    pt = {"u": Fraction(3, 7), "v": Fraction(-5, 11)}
    vals = [[_evalp(e, pt) for e in row] for row in jac]
    if all(x == 0 for row in vals for x in row):
        return "point"
    return "curve"


def _evalp(p: Poly, pt):
    if not p.terms:
        return 0
    return p.evaluate({k: v for k, v in pt.items() if k in p.ring})


# ---------------------------------------------------------------------------
# closed-form family censuses


def _tpoly(expr_fn) -> list:
    t = Poly.var("t")
    return _tp(expr_fn(t))


def Hc(A, B) -> list:
    return _tpoly(lambda t: B * t ** 3 * (t + 1) ** 3 + t ** 3 - A * (t + 1) ** 3)


def Hn(A, B) -> list:
    return _tpoly(lambda t: (t + 1) ** 4 * (B * t ** 2 + A) ** 2
                  + 2 * t ** 2 * (t + 1) ** 2 * (B * t ** 2 - A) + t ** 4)


def Hc1(A) -> list:
    return _tpoly(lambda t: (3 * t + A) * (t + A) ** 3 - 1)


def Hn1(A) -> list:
    return _tpoly(lambda t: t ** 2 * (t + A) ** 2 + 1)


def Hc2(A, B) -> list:
    return _tpoly(lambda t: 6 * t ** 2 + (6 * A + 3) * t + A ** 2 + 2 * B)


def _split_counts(cusp: list, node: list) -> Tuple[int, int, int]:
    prof = dict(_counts(u_monic(cusp)))
    nodes_left = u_remove_common(u_monic(node), cusp)
    nd = _distinct(nodes_left)
    if nd % 2:
        raise CensusError("odd number of node parameters")
    return prof.get(1, 0), prof.get(2, 0), nd // 2


def census_family1(A, B) -> Census:
    if A == 0 or B == 0:
        raise ParamOutOfDomain("A*B must be nonzero")
    hc, hn = Hc(A, B), Hn(A, B)
    c1, c2, n = _split_counts(hc, hn)
    cen = Census(c1, c2, n, 0, cusp_poly=u_monic(hc), node_poly=u_monic(hn),
                 critical_set="cubic")
    cen.components = [{"name": "C", "kind": "cubic", "dim": 1, "multiplicity": 1,
                       "topo": "cubic", "restriction": "injective"}]
    cen.notes.append("H0 = 0" if H0(A, B) == 0 else "H0 != 0")
    return cen


def census_family8(A) -> Census:
    hc, hn = Hc1(A), Hn1(A)
    c1, c2, n = _split_counts(hc, hn)
    cen = Census(c1, c2, n, 0, cusp_poly=u_monic(hc), node_poly=u_monic(hn),
                 critical_set="cubic")
    cen.components = [{"name": "C", "kind": "cubic", "dim": 1, "multiplicity": 1,
                       "topo": "cubic", "restriction": "injective"}]
    return cen


def family4_structure(A) -> Census:
    if A == 0:
        raise ParamOutOfDomain("A must be nonzero")
    t = Poly.var("t")
    cusp = u_remove_common(_tp(t ** 3 - A), _tp(t - 1))
    inter = _tp((t - 1) * (t * t - A))
    cen = Census(_distinct(cusp), 0, 0, _distinct(inter), cusp_poly=u_monic(cusp),
                 critical_set="hyperbola + line")
    cen.components = [
        {"name": "C1", "kind": "hyperbola", "dim": 1, "multiplicity": 1, "topo": "C*",
         "restriction": "injective"},
        {"name": "C2", "kind": "line", "dim": 1, "multiplicity": 1, "topo": "C",
         "restriction": "2:1"}]
    return cen


def census_discrete(k: int) -> Census:
    cls = AffineClass.discrete(k)
    return census_from_components(representative(k), components_for(cls))


def census_of(cls: AffineClass) -> Census:
    """Census of the canonical form of ``cls`` (closed forms for families)."""
    if cls.kind == "family":
        if cls.number in (1, 2):
            return census_family1(*cls.params)
        if cls.number == 4:
            return family4_structure(cls.params[0])
        return census_family8(cls.params[0])
    return census_discrete(cls.number)


def census_generic(cls: AffineClass) -> Census:
    """Census from the component engine (used to cross-check the closed forms)."""
    return census_from_components(cls.canonical_form(), components_for(cls))


# ---------------------------------------------------------------------------
# structure verification


@dataclass
class StructureReport:
    ok: bool
    checks: List[Tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.checks.append((name, bool(ok), detail))
        if not ok:
            self.ok = False

    def failures(self) -> List[str]:
        return [f"{n}: {d}" for n, ok, d in self.checks if not ok]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [{"name": n, "ok": ok, "detail": d}
                                          for n, ok, d in self.checks]}


def _param_vanishes(h: Poly, comp: Component) -> bool:
    return not u_trim(_poly_eval_param(h, comp))


def _divide_out(ms: List[Poly], h: Poly) -> Tuple[List[Poly], int]:
    """Divide every nonzero minor by h as often as all of them allow."""
    times = 0
    while any(not m.is_zero() for m in ms):
        try:
            ms2 = [m.exact_div(h) if not m.is_zero() else m for m in ms]
        except Exception:
            break
        ms, times = ms2, times + 1
    return ms, times


def _random_plane(rng) -> dict:
    def vec():
        return [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)]
    return {"point": vec(), "e1": vec(), "e2": vec()}


def _on_plane(ps: List[Poly], plane: dict) -> List[Poly]:
    ring = ("u", "v")
    u, v = Poly.var("u", ring), Poly.var("v", ring)
    sub = {n: u * a + v * b + c for n, a, b, c in zip(XYZ, plane["e1"], plane["e2"], plane["point"])}
    return [p.to_ring(XYZ).substitute(sub).to_ring(ring) for p in ps]


def _common_zeros(ps: List[Poly], rng) -> Optional[int]:
    """Distinct common zeros in C^2 of polynomials in u, v (None if infinite).

    Uses random combinations L1, L2, L3 of the inputs; the count is the number
    of distinct roots of gcd(Res_v(L1, L2), Res_v(L1, L3)), which is exact for
    generic combinations and a generic plane.
    """
    ps = [p for p in ps if not p.is_zero()]
    if not ps:
        return None
    if any(p.is_const() for p in ps):
        return 0

    def combo():
        out = Poly(("u", "v"))
        for p in ps:
            out = out + p * Fraction(rng.randint(1, 97), rng.randint(1, 7))
        return out

    L = [combo() for _ in range(3)]
    if len(ps) == 1:
        return None
    R2 = _res_var(L[0], L[1], "v", "u")
    R3 = _res_var(L[0], L[2], "v", "u")
    if not R2 or not R3:
        return None
    return _distinct(u_gcd(R2, R3))


def _res_var(a: Poly, b: Poly, var: str, other: str) -> list:
    if a.degree(var) <= 0 and b.degree(var) <= 0:
        return u_gcd(_univ_or_const(a, other), _univ_or_const(b, other))
    R = resultant(a, b, var)
    if not R.terms:
        return []
    return R.scalar_coeffs(other) if other in R.ring else [R.const_value()]


def _univ_or_const(p: Poly, var: str) -> list:
    if p.is_const():
        return [p.const_value()]
    return p.scalar_coeffs(var)


def _expected_plane_points(curves: List[Component], plane: dict) -> int:
    e1, e2, pt = plane["e1"], plane["e2"], plane["point"]
    n = [e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2],
         e1[0] * e2[1] - e1[1] * e2[0]]
    c = sum(a * b for a, b in zip(n, pt))
    total = 0
    for comp in curves:
        X, Y, Z, d = comp.param
        lin = u_sub(u_add(u_add(u_scale(X, n[0]), u_scale(Y, n[1])), u_scale(Z, n[2])),
                    u_scale(d, c))
        lin = u_remove_common(lin, d) if len(d) > 1 else lin
        total += _distinct(lin)
    return total


def verify_critical_structure(F: QuadMap, comps: Optional[List[Component]], seed: int = 0,
                              census: Optional[Census] = None) -> StructureReport:
    """Check the component table of F against its minors.

    * implicit equations and the three minors vanish on each parametrization;
    * each surface equation divides all minors (with the stated multiplicity);
    * after removing surfaces, the common zeros of the minors on a random
      plane are exactly the points of the listed curves;
    * the restriction behaviour matches the stated one.
    """
    import random

    rng = random.Random(seed)
    rep = StructureReport(True)
    ms = list(minors(F))
    if comps is None:
        rep.add("critical set is everything", all(m.is_zero() for m in ms))
        return rep
    curves = [c for c in comps if c.param is not None and c.dim == 1]
    cyls = [c for c in comps if c.param is not None and c.dim == 2]
    surfs = [c for c in comps if c.param is None]
    for comp in curves + cyls:
        for h in comp.equations:
            rep.add(f"{comp.name}: {h} on parametrization", _param_vanishes(h, comp))
        if comp.dim == 1:
            for m, lab in zip(ms, ("m_xy", "m_xz", "m_yz")):
                rep.add(f"{comp.name}: {lab} vanishes", _param_vanishes(m, comp))
    work = ms
    for comp in surfs + cyls:
        work, k = _divide_out(work, comp.equations[0])
        rep.add(f"{comp.name}: divides minors {comp.mult} time(s)", k >= comp.mult,
                f"divides {k} time(s)")
    if all(m.is_zero() for m in work):
        rep.add("no residual surface", False, "minors vanish identically after division")
        return rep
    for _ in range(3):
        plane = _random_plane(rng)
        res = _on_plane(work, plane)
        got = _common_zeros(res, rng)
        # points of the residual locus lying on a listed surface are embedded
        for comp in surfs + cyls:
            if got is not None:
                emb = _common_zeros(res + _on_plane([comp.equations[0]], plane), rng)
                got = None if emb is None else got - emb
        want = _expected_plane_points(curves, plane)
        if got is not None and got == want:
            rep.add("random plane section", True, f"{got} point(s)")
            break
    else:
        rep.add("random plane section", False, f"found {got}, expected {want}")
    cen = census if census is not None else census_from_components(F, comps)
    by_name = {c["name"]: c for c in cen.components}
    for comp in comps:
        if comp.claimed is None:
            continue
        got = by_name.get(comp.name, {}).get("restriction", "")
        want = comp.claimed if comp.param is not None else "image " + comp.claimed
        rep.add(f"{comp.name}: restriction {want}", got == want, f"computed {got}")
    return rep


def verify_class_structure(cls: AffineClass, seed: int = 0) -> StructureReport:
    F = cls.canonical_form()
    return verify_critical_structure(F, components_for(cls), seed)


# ---------------------------------------------------------------------------
# resultant identities for the family discriminants


@dataclass
class IdentityResult:
    name: str
    holds: bool
    sign: int
    lhs_degree: int

    def to_dict(self) -> dict:
        return {"name": self.name, "holds": self.holds, "sign": self.sign}


def _symbolic_H():
    ring = ("A", "B", "t")
    A, B, t = (Poly.var(v, ring) for v in ring)
    hc = B * t ** 3 * (t + 1) ** 3 + t ** 3 - A * (t + 1) ** 3
    hn = ((t + 1) ** 4 * (B * t ** 2 + A) ** 2 + 2 * t ** 2 * (t + 1) ** 2 * (B * t ** 2 - A)
          + t ** 4)
    h0 = ((A + B) ** 4 + (A - 1) ** 4 + (B + 1) ** 4 - A ** 4 - B ** 4 - 1
          + 124 * A * B * (A - B + 1))
    return A, B, hc, hn, h0


def verify_resultant_identities() -> List[IdentityResult]:
    """Res_t(Hc, Hc'), Res_t(Hn, Hn') and Res_t(Hc, Hn) against H0.

    Resultants use the Sylvester convention (first argument on top); an
    identity holds if the two sides agree up to a sign, which is recorded.
    """
    A, B, hc, hn, h0 = _symbolic_H()
    cases = [
        ("Res(Hc, Hc')", hc, hc.diff("t"), A ** 2 * B ** 3 * h0 * (-729)),
        ("Res(Hn, Hn')", hn, hn.diff("t"), A ** 8 * B ** 10 * h0 * 16777216),
        ("Res(Hc, Hn)", hc, hn, A ** 4 * B ** 4 * h0 ** 2),
    ]
    out = []
    for name, p, q, rhs in cases:
        lhs = resultant(p, q, "t").to_ring(("A", "B"))
        rhs = rhs.to_ring(("A", "B"))
        if lhs == rhs:
            sign = 1
        elif lhs == -rhs:
            sign = -1
        else:
            sign = 0
        out.append(IdentityResult(name, sign != 0, sign, lhs.degree()))
    return out
