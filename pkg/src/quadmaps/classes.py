"""Catalogue of affine classes: representatives and parametric families."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, Tuple

from .field import TowerElem
from .maps import QuadMap
from .parse import parse_map
from .poly import _norm

REPRESENTATIVES = {
    1: ("x^2+z^2+2*y", "y^2+z^2+2*x+2*z"),
    2: ("x^2+z^2+y", "y^2+z^2+4*x+i*z"),
    3: ("x^2+z^2+y", "y^2+z^2+x+2*z"),
    4: ("x^2+z^2+y", "y^2+z^2+2*x"),
    5: ("x^2+z^2+2*y", "y^2+z^2+2*x"),
    6: ("x^2+z^2+2*y", "y^2+z^2"),
    7: ("x^2+z^2", "y^2+z^2"),
    8: ("x^2+z^2+2*y", "y*z+x"),
    9: ("x^2+z^2+2*y", "y*z+x+sqrt(2)*(1+i)*y"),
    10: ("x^2+z^2+2*y", "y*z+y"),
    11: ("x^2+z^2", "y*z+x+y"),
    12: ("x^2+z^2", "y*z+y"),
    13: ("x^2+z^2+2*y", "y*z"),
    14: ("x^2+z^2", "y*z+x"),
    15: ("x^2+z^2", "y*z"),
    16: ("x^2+y^2+2*z", "z^2+2*x"),
    17: ("x^2+y^2", "z^2+2*x"),
    18: ("x*y+z", "z^2+2*x"),
    19: ("x*y", "z^2+2*x"),
    20: ("x^2+y^2+2*z", "z^2"),
    21: ("x^2+y^2", "z^2"),
    22: ("x^2+2*y*z", "y^2+2*x*y+2*z"),
    23: ("x^2+2*y*z", "y^2+2*x*y+3/8*y+2*z"),
    24: ("x^2+2*y*z", "y^2+2*x*y+2*x"),
    25: ("x^2+2*y*z", "y^2+2*x*y+2*y"),
    26: ("x^2+2*y*z", "y^2+2*x*y"),
    27: ("x^2+2*y*z", "z^2+2*y"),
    28: ("x^2+2*y*z", "z^2+2*x"),
    29: ("x^2+2*y*z", "z^2+2*z"),
    30: ("x^2+2*y*z", "z^2"),
    31: ("x^2+2*z", "y^2+2*z"),
    32: ("x^2+z", "y^2+x"),
    33: ("x^2+z", "y^2"),
    34: ("x^2+2*y", "y^2+2*x"),
    35: ("x^2+2*y", "y^2"),
    36: ("x^2", "y^2"),
    37: ("x*y", "y*z+z"),
    38: ("x*y+z", "y*z"),
    39: ("x*y", "y*z"),
    40: ("x*y", "y^2+2*z"),
    41: ("x*y+z", "y^2+x"),
    42: ("x*y+z", "y^2"),
    43: ("x*y", "y^2+2*x"),
    44: ("x*y", "y^2+2*y"),
    45: ("x*y", "y^2"),
    46: ("x^2+y*z", "x"),
    47: ("x^2+y*z", "y"),
    48: ("x^2+y^2+z^2", "0"),
    49: ("x^2+y^2", "z"),
    50: ("x^2+y^2+z", "x"),
    51: ("x^2+y^2", "x"),
    52: ("x*y+z", "x"),
    53: ("x*y", "x"),
    54: ("x^2+y^2+z", "0"),
    55: ("x^2+y^2", "0"),
    56: ("x^2+z", "y"),
    57: ("x^2", "y"),
    58: ("x^2+y", "x"),
    59: ("x^2", "x"),
    60: ("x^2+y", "0"),
    61: ("x^2", "0"),
    62: ("x", "y"),
    63: ("x", "0"),
    64: ("0", "0"),
}

FAMILY_ITEMS = (1, 2, 4, 8)
DISCRETE_ITEMS = tuple(k for k in range(1, 65) if k not in FAMILY_ITEMS)
EXCEPTIONAL_AB = ((1, 4), (Fraction(-1, 4), Fraction(1, 4)), (-4, -1))
# printed parameters of the family representatives
PRINTED_PARAMS = {1: (1, 1), 2: (Fraction(1, 16), Fraction(-1, 16)), 4: (Fraction(1, 4),), 8: (0,)}


def representative(k: int, session=None) -> QuadMap:
    return parse_map(*REPRESENTATIVES[k], session=session)


def family1_form(A, B) -> QuadMap:
    """(x^2 + B z^2 + 2A y, A y^2 + B z^2 + 2x + 2B z)."""
    f = [1, 0, 0, 0, 0, B, 0, _norm(2 * A), 0, 0]
    g = [0, 0, 0, A, 0, B, 2, 0, _norm(2 * B), 0]
    return QuadMap(f, g)


def family4_form(A) -> QuadMap:
    """(x^2 + z^2 + 2A y, A y^2 + z^2 + 2x)."""
    return QuadMap([1, 0, 0, 0, 0, 1, 0, _norm(2 * A), 0, 0],
                   [0, 0, 0, A, 0, 1, 2, 0, 0, 0])


def family8_form(A) -> QuadMap:
    """(x^2 + z^2 + 2y, yz + x + A y)."""
    return QuadMap([1, 0, 0, 0, 0, 1, 0, 2, 0, 0],
                   [0, 0, 0, 0, 1, 0, 1, A, 0, 0])


def H0(A, B):
    return _norm((A + B) ** 4 + (A - 1) ** 4 + (B + 1) ** 4 - A ** 4 - B ** 4 - 1
                 + 124 * A * B * (A - B + 1))


def is_exceptional(A, B) -> bool:
    return any(A == a and B == b for a, b in EXCEPTIONAL_AB)


def canon_scalar(v):
    """Descend to the smallest tower level, then to int/Fraction if possible."""
    if isinstance(v, TowerElem):
        v = v.descended()
    return _norm(v)


def _key(v):
    if isinstance(v, TowerElem):
        b = v.base_value()
        if b is not None:
            return (0, b[0], b[1], "")
        return (1, 0, 0, str(v))
    return (0, Fraction(v), Fraction(0), "")


@dataclass(frozen=True)
class AffineClass:
    """Discrete(k) or Family<n>(params).

    ``orbit`` holds the parameter tuples reached by the recipe under the
    symmetries of the leading part (used for comparing family members).
    """

    kind: str                 # "discrete" | "family"
    number: int               # class number 1..64 or family item 1, 2, 4, 8
    params: Tuple = ()
    orbit: FrozenSet = field(default=frozenset(), compare=False)

    @classmethod
    def discrete(cls, k: int) -> "AffineClass":
        return cls("discrete", k)

    @classmethod
    def family(cls, n: int, *params, orbit=()) -> "AffineClass":
        params = tuple(canon_scalar(p) for p in params)
        orb = frozenset(tuple(canon_scalar(v) for v in t) for t in orbit) | {params}
        return cls("family", n, params, orb)

    @property
    def item(self) -> int:
        """Item number in the list of 64 representatives."""
        return self.number

    @property
    def is_family(self) -> bool:
        return self.kind == "family"

    def label(self) -> str:
        if self.kind == "discrete":
            return f"Discrete({self.number})"
        names = ("A", "B")
        inner = ", ".join(f"{n}={_fmt(p)}" for n, p in zip(names, self.params))
        return f"Family{self.number}({inner})"

    __str__ = label

    def same_class(self, other: "AffineClass") -> bool:
        """Equality up to the recorded parameter symmetries."""
        if self.kind != other.kind or self.number != other.number:
            return False
        if self.kind == "discrete":
            return True
        if self.number == 8:
            return _norm(self.params[0] ** 4) == _norm(other.params[0] ** 4)
        return any(_tuple_eq(p, q) for p in self.orbit for q in other.orbit)

    def canonical_form(self) -> QuadMap:
        if self.kind == "discrete":
            return _rep_cache(self.number)
        if self.number in (1, 2):
            return family1_form(*self.params)
        if self.number == 4:
            return family4_form(self.params[0])
        return family8_form(self.params[0])

    def sorted_orbit(self):
        return sorted(self.orbit, key=lambda t: tuple(_key(v) for v in t))

    def to_dict(self) -> dict:
        from .report import literal_to_json

        d = {"kind": "discrete" if self.kind == "discrete" else f"family{self.number}",
             "item": self.number, "label": self.label()}
        if self.kind == "family":
            d["params"] = [literal_to_json(p) for p in self.params]
            d["params_text"] = [_fmt(p) for p in self.params]
            d["parameter_note"] = "canonical per recipe, completeness not asserted"
        return d


def _tuple_eq(p, q) -> bool:
    return len(p) == len(q) and all(a == b for a, b in zip(p, q))


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return str(v)


_REP = {}


def _rep_cache(k: int) -> QuadMap:
    if k not in _REP:
        _REP[k] = representative(k)
    return _REP[k]
