"""Symbolic composition identities used by the three-points-at-infinity recipes.

Each identity has the shape ``outer o F o inner == expected`` with polynomial
parameters ``a`` (alpha) and ``b`` (beta).  Identities whose printed form has
a rational dependence on a parameter are cleared of denominators first.
Where the printed right-hand side is wrong, both the printed and the corrected
forms are evaluated so reports can show each outcome.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .parse import parse_poly
from .poly import Poly

RING = ("x", "y", "z", "p", "q", "a", "b")


def _P(s: str) -> Poly:
    return parse_poly(s, RING).to_ring(RING)


def compose(outer: Sequence[str], F: Sequence[str], inner: Sequence[str]) -> Tuple[Poly, Poly]:
    """outer o F o inner, all given as expressions (outer in p, q; F, inner in x, y, z)."""
    sub_in = dict(zip(("x", "y", "z"), (_P(e) for e in inner)))
    f, g = (_P(e).substitute(sub_in).to_ring(RING) for e in F)
    sub_out = {"p": f, "q": g}
    return tuple(_P(e).substitute(sub_out).to_ring(RING) for e in outer)


@dataclass
class Identity:
    name: str
    outer: Tuple[str, str]
    F: Tuple[str, str]
    inner: Tuple[str, str, str]
    expected: Tuple[str, str]
    printed: Optional[Tuple[str, str]] = None   # printed right-hand side when it differs
    note: str = ""

    def lhs(self) -> Tuple[Poly, Poly]:
        return compose(self.outer, self.F, self.inner)

    def holds(self, rhs: Optional[Tuple[str, str]] = None) -> bool:
        rhs = rhs or self.expected
        return all(u == _P(v) for u, v in zip(self.lhs(), rhs))

    def report(self) -> dict:
        out = {"name": self.name, "holds": self.holds(),
               "outer": list(self.outer), "map": list(self.F), "inner": list(self.inner),
               "result": [str(u) for u in self.lhs()], "expected": list(self.expected)}
        if self.printed is not None:
            out["printed"] = list(self.printed)
            out["printed_holds"] = self.holds(self.printed)
        if self.note:
            out["note"] = self.note
        return out


# alpha = 0: a beta*z term becomes i*beta*x
SWAP_BETA = Identity(
    "beta z to i beta x",
    ("-p+1/2", "q-p+1/4"),
    ("x^2+z^2+y", "y^2+z^2+b*z"),
    ("i*z", "-y+1/2", "i*x"),
    ("x^2+z^2+y", "y^2+z^2+i*b*x"))

# no y term, alpha != 0; multiplied through by a^2
NO_Y_ALPHA = Identity(
    "no y term, alpha nonzero",
    ("q+b^2/4", "p-b^2/4"),
    ("x^2+z^2", "y^2+z^2+a*x+b*z"),
    ("a*y", "a*x", "a*z-b/2"),
    ("a^2*x^2+a^2*z^2+a^2*y", "a^2*y^2+a^2*z^2-a*b*z"),
    printed=("a^2*x^2+a^2*z^2+a^2*y", "a^2*y^2+a^2*z^2-a*b*x"),
    note="the linear term is -(b/a) z, not -(b/a) x; apply the beta-z swap next")

# no y term, alpha = 0; multiplied through by b^2
NO_Y_BETA = Identity(
    "no y term, alpha zero",
    ("p-q", "p"),
    ("x^2+z^2", "y^2+z^2+b*z"),
    ("b*z", "i*b*x", "-b*y"),
    ("b^2*x^2+b^2*z^2+b^2*y", "b^2*y^2+b^2*z^2"))

# equivalences between the three exceptional parameter pairs
EXC_1 = Identity(
    "(1,4) from (-1/4,1/4)",
    ("4*p+2", "4*p-4*q+1"),
    ("x^2+1/4*z^2-1/2*y", "-1/4*y^2+1/4*z^2+2*x+1/2*z"),
    ("-z", "-y+1", "-x"),
    ("x^2+4*z^2+2*y", "y^2+4*z^2+2*x+8*z"),
    note="printed target constant +3 must be +1")
EXC_1_PRINTED_OUTER = ("4*p+2", "4*p-4*q+3")

EXC_2 = Identity(
    "(-1/4,1/4) from (-4,-1)",
    ("-q/4+1/4", "-p/4-1/4"),
    ("x^2-z^2-8*y", "-4*y^2-z^2+2*x-2*z"),
    ("y", "x", "-z-1"),
    ("x^2+1/4*z^2-1/2*y", "-1/4*y^2+1/4*z^2+2*x+1/2*z"))

ALL = (SWAP_BETA, NO_Y_ALPHA, NO_Y_BETA, EXC_1, EXC_2)


def exceptional_printed_holds() -> bool:
    """The first exceptional equivalence with the printed constant."""
    lhs = compose(EXC_1_PRINTED_OUTER, EXC_1.F, EXC_1.inner)
    return all(u == _P(v) for u, v in zip(lhs, EXC_1.expected))


def verify_all() -> List[dict]:
    out = [i.report() for i in ALL]
    out[3]["printed_outer"] = list(EXC_1_PRINTED_OUTER)
    out[3]["printed_holds"] = exceptional_printed_holds()
    return out
