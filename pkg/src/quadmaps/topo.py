"""Topological classes (1..47) and the explicit merge witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .classes import AffineClass, PRINTED_PARAMS
from .parse import parse_poly
from .poly import Poly

XYZ = ("x", "y", "z")
PQ = ("p", "q")


class NotDistinguishedByTable(Exception):
    pass


@dataclass(frozen=True, order=True)
class TopoIndex:
    index: int
    letter: str = ""

    def __str__(self):
        return f"{self.index}{self.letter}"

    def to_dict(self) -> dict:
        return {"index": self.index, "letter": self.letter or None}


# merged groups: topological index -> affine classes in letter order
MERGES = {
    24: (24, 37),
    28: (28, 31, 40, 46, 49),
    31: (32, 41, 50, 52, 56, 58, 62),
    32: (33, 42, 51, 57),
    44: (54, 59, 60, 63),
}
SINGLES = {25: 25, 26: 26, 27: 27, 29: 29, 30: 30, 33: 34, 34: 35, 35: 36, 36: 38, 37: 39,
           38: 43, 39: 44, 40: 45, 41: 47, 42: 48, 43: 53, 45: 55, 46: 61, 47: 64}


def _build() -> Dict[int, TopoIndex]:
    t: Dict[int, TopoIndex] = {}
    for k in range(1, 24):
        t[k] = TopoIndex(k)
    for idx, ks in MERGES.items():
        for letter, k in zip("abcdefg", ks):
            t[k] = TopoIndex(idx, letter)
    for idx, k in SINGLES.items():
        t[k] = TopoIndex(idx)
    return t


TABLE: Dict[int, TopoIndex] = _build()


def topo_index(c: Union[AffineClass, int]) -> TopoIndex:
    """Families map by their item number (1, 2, 4, 8); discrete classes via the table."""
    k = c.number if isinstance(c, AffineClass) else int(c)
    return TABLE[k]


def members(idx: int) -> List[int]:
    return sorted((k for k, t in TABLE.items() if t.index == idx), key=lambda k: TABLE[k])


def representative_class(idx: int) -> AffineClass:
    k = members(idx)[0]
    if k in PRINTED_PARAMS:
        return AffineClass.family(k, *PRINTED_PARAMS[k])
    return AffineClass.discrete(k)


# ---------------------------------------------------------------------------
# merge witnesses

Expr = Union[str, Poly]


def _poly(e: Expr, ring) -> Poly:
    return (parse_poly(e, ring) if isinstance(e, str) else e).to_ring(ring)


@dataclass
class ChainStep:
    side: str                      # "source" | "target"
    exprs: Tuple[Expr, ...]
    expect: Optional[Tuple[str, str]] = None

    def apply(self, f: Poly, g: Poly) -> Tuple[Poly, Poly]:
        if self.side == "source":
            sub = {v: _poly(e, XYZ) for v, e in zip(XYZ, self.exprs)}
            return f.substitute(sub).to_ring(XYZ), g.substitute(sub).to_ring(XYZ)
        sub = {"p": f, "q": g}
        out = [_poly(e, PQ).substitute(sub).to_ring(XYZ) for e in self.exprs]
        return out[0], out[1]

    def jacobian_unit(self) -> bool:
        """The step is an automorphism if its Jacobian determinant is a nonzero constant."""
        ring = XYZ if self.side == "source" else PQ
        ps = [_poly(e, ring) for e in self.exprs]
        J = [[p.diff(v) for v in ring] for p in ps]
        if len(ring) == 2:
            d = J[0][0] * J[1][1] - J[0][1] * J[1][0]
        else:
            d = (J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1])
                 - J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0])
                 + J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]))
        return d.is_const() and not d.is_zero()

    def text(self) -> str:
        return "(" + ", ".join(str(e) for e in self.exprs) + ")"


@dataclass
class MergeWitness:
    name: str
    start: Tuple[str, str]
    steps: List[ChainStep]
    target: Tuple[str, str]
    notes: List[str] = field(default_factory=list)

    def run(self) -> dict:
        f, g = (_poly(e, XYZ) for e in self.start)
        forms = []
        ok = True
        for st in self.steps:
            if not st.jacobian_unit():
                ok = False
            f, g = st.apply(f, g)
            forms.append((str(f), str(g)))
            if st.expect is not None:
                ok = ok and (f, g) == tuple(_poly(e, XYZ) for e in st.expect)
        ok = ok and (f, g) == tuple(_poly(e, XYZ) for e in self.target)
        return {"name": self.name, "verified": ok, "start": list(self.start),
                "steps": [{"side": s.side, "map": s.text(), "result": list(r)}
                          for s, r in zip(self.steps, forms)],
                "target": list(self.target), "notes": list(self.notes)}


def solve_h() -> Poly:
    """The polynomial h(u, y) with p/2 - q^2/8 = y h(2x, y) after composing with F24.

    Obtained by exact division by y followed by the substitution x = u/2.
    """
    x, y = Poly.var("x", XYZ), Poly.var("y", XYZ)
    f = x * x + y * Poly.var("z", XYZ) * 2
    g = y * y + x * y * 2 + x * 2
    rest = f * Fraction(1, 2) - g * g * Fraction(1, 8) - y * Poly.var("z", XYZ)
    hq = rest.exact_div(y)
    ring = ("u", "y")
    return hq.substitute({"x": Poly.var("u", ring) * Fraction(1, 2)}).to_ring(ring)


def _h_at(h: Poly, u: Poly, yv: Poly) -> Poly:
    return h.substitute({"u": u, "y": yv}).to_ring(XYZ)


def merge_witnesses() -> List[MergeWitness]:
    h = solve_h()
    x, y = Poly.var("x", XYZ), Poly.var("y", XYZ)
    z = Poly.var("z", XYZ)
    h2 = _h_at(h, x * 2, y)
    w24 = MergeWitness(
        "F24 to (xy, (y+1)z)", ("x^2+2*y*z", "y^2+2*x*y+2*x"),
        [ChainStep("target", ("p/2-q^2/8", "q-1"), (y * (z + h2), "y^2+2*x*y+2*x-1")),
         ChainStep("source", (x * Fraction(1, 2), y, z - _h_at(h, x, y)),
                   ("y*z", "(x+y-1)*(y+1)")),
         ChainStep("source", ("z-y+1", "y", "x"))],
        ("x*y", "(y+1)*z"), [f"h(u, y) = {h}"])
    w28 = MergeWitness(
        "F28 to (x, yz)", ("x^2+2*y*z", "z^2+2*x"),
        [ChainStep("source", ("2*x", "y", "2*z")),
         ChainStep("target", ("p/4", "q/4"), ("x^2+y*z", "z^2+x")),
         ChainStep("source", ("x-z^2", "y+2*x*z-z^3", "z"), ("x^2+y*z", "x")),
         ChainStep("target", ("q", "p-q^2"))],
        ("x", "y*z"), ["the second source step uses -z^3; the +z^3 variant leaves 2z^4"])
    w31 = MergeWitness(
        "F31 to (x, yz)", ("x^2+2*z", "y^2+2*z"),
        [ChainStep("target", ("p", "p-q"), ("x^2+2*z", "x^2-y^2")),
         ChainStep("source", ("x", "y", "(z-x^2)/2"), ("z", "x^2-y^2")),
         ChainStep("source", ("(y+z)/2", "(y-z)/2", "x"))],
        ("x", "y*z"))
    return [w24, w28, w31]


def f28_printed_sign_fails() -> bool:
    """The printed +z^3 in the F28 chain does not give (x^2+yz, x)."""
    st = ChainStep("source", ("x-z^2", "y+2*x*z+z^3", "z"))
    f, g = st.apply(_poly("x^2+y*z", XYZ), _poly("z^2+x", XYZ))
    return (f, g) != (_poly("x^2+y*z", XYZ), _poly("x", XYZ))


def verify_merge_witnesses() -> List[dict]:
    return [w.run() for w in merge_witnesses()]


# ---------------------------------------------------------------------------
# distinguishing facts


def signature(idx: int):
    from .census import census_of

    return census_of(representative_class(idx)).signature()


def _describe(sig) -> List[str]:
    status, c, dc, n, inter, comps = sig
    out = []
    if status:
        out.append(f"critical set {status}")
    out.append(f"{c} cusps, {dc} double cusps, {n} nodes, {inter} image intersections")
    for dim, mult, topo, restr, cusps in comps:
        out.append(f"component dim {dim} mult {mult} {topo}: {restr}"
                   + (f", {cusps} cusp(s) on its image" if cusps else ""))
    return out


def distinguishing_report(i: Union[int, TopoIndex], j: Union[int, TopoIndex]) -> str:
    """Census facts separating two topological classes."""
    a = i.index if isinstance(i, TopoIndex) else int(i)
    b = j.index if isinstance(j, TopoIndex) else int(j)
    if a == b:
        raise ValueError("indices must differ")
    sa, sb = signature(a), signature(b)
    if sa == sb:
        raise NotDistinguishedByTable(
            f"{a} and {b} have identical census data; separated by the classification table only")
    da, db = _describe(sa), _describe(sb)
    lines = [f"{a} vs {b}:"]
    lines += [f"  {a}: {s}" for s in da if s not in db]
    lines += [f"  {b}: {s}" for s in db if s not in da]
    return "\n".join(lines)

