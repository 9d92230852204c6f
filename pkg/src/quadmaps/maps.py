"""Quadratic maps C^3 -> C^2 and their affine transformations.

A component is stored as ten coefficients in the order
``x^2, xy, xz, y^2, yz, z^2, x, y, z, 1``.  A witness step (phi, psi)
transforms a map ``F`` into ``psi o F o phi``; a chain is a list of steps
applied left to right.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

from . import linalg as la
from .field import TowerElem
from .poly import Poly, _norm, merge_rings

MONOMIALS = ("x^2", "xy", "xz", "y^2", "yz", "z^2", "x", "y", "z", "1")
_EXPS = ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2),
         (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0))
XYZ = ("x", "y", "z")


class MapError(ValueError):
    pass


class DegreeTooHigh(MapError):
    pass


class WrongVariables(MapError):
    pass


class SingularTransformation(MapError):
    pass


class WitnessMismatch(MapError):
    pass


def _c(v):
    if isinstance(v, bool):
        raise TypeError("boolean coefficient")
    if isinstance(v, (int, Fraction, TowerElem)):
        return _norm(v)
    raise TypeError(f"unsupported coefficient {v!r}")


def _sym(a) -> List[list]:
    h = Fraction(1, 2)
    return [[a[0], _norm(a[1] * h), _norm(a[2] * h)],
            [_norm(a[1] * h), a[3], _norm(a[4] * h)],
            [_norm(a[2] * h), _norm(a[4] * h), a[5]]]


def _from_parts(M, l, c) -> tuple:
    return (M[0][0], _norm(2 * M[0][1]), _norm(2 * M[0][2]), M[1][1],
            _norm(2 * M[1][2]), M[2][2], l[0], l[1], l[2], c)


def _comp_pullback(a, L, t) -> tuple:
    """Coefficients of h(Lx + t) for h with coefficient vector a."""
    M = _sym(a)
    l = list(a[6:9])
    c = a[9]
    LT = la.transpose(L)
    M2 = la.matmul(LT, la.matmul(M, L))
    Mt = la.matvec(M, t)
    l2 = la.matvec(LT, [_norm(2 * m + x) for m, x in zip(Mt, l)])
    c2 = _norm(la.dot(t, Mt) + la.dot(l, t) + c)
    return _from_parts(M2, l2, c2)


class QuadMap:
    """A polynomial map (f, g) of degree at most two in x, y, z."""

    __slots__ = ("f", "g")

    def __init__(self, f: Sequence, g: Sequence):
        if len(f) != 10 or len(g) != 10:
            raise MapError("each component needs ten coefficients")
        self.f = tuple(_c(v) for v in f)
        self.g = tuple(_c(v) for v in g)

    # construction -----------------------------------------------------------
    @classmethod
    def from_polys(cls, f, g) -> "QuadMap":
        return cls(_poly_coeffs(f), _poly_coeffs(g))

    @classmethod
    def zero(cls) -> "QuadMap":
        return cls((0,) * 10, (0,) * 10)

    def components(self):
        return (self.f, self.g)

    def to_polys(self) -> Tuple[Poly, Poly]:
        return _coeffs_poly(self.f), _coeffs_poly(self.g)

    # structure --------------------------------------------------------------
    def degree(self, i: int) -> int:
        a = self.components()[i]
        if any(not (v == 0) for v in a[:6]):
            return 2
        if any(not (v == 0) for v in a[6:9]):
            return 1
        if not (a[9] == 0):
            return 0
        return -1

    def top(self) -> "QuadMap":
        """Leading homogeneous parts of each component."""
        out = []
        for i, a in enumerate(self.components()):
            d = self.degree(i)
            if d == 2:
                out.append(tuple(a[:6]) + (0,) * 4)
            elif d == 1:
                out.append((0,) * 6 + tuple(a[6:9]) + (0,))
            else:
                out.append(tuple(a))
        return QuadMap(*out)

    def quadratic_part(self) -> "QuadMap":
        return QuadMap(tuple(self.f[:6]) + (0,) * 4, tuple(self.g[:6]) + (0,) * 4)

    def sym_matrix(self, i: int) -> List[list]:
        return _sym(self.components()[i])

    def linear_form(self, i: int) -> list:
        return list(self.components()[i][6:9])

    def constant(self, i: int):
        return self.components()[i][9]

    def is_homogeneous_quadratic(self) -> bool:
        return all(v == 0 for a in self.components() for v in a[6:])

    # transformations -------------------------------------------------------------
    def pullback(self, phi: "SourceAut") -> "QuadMap":
        return QuadMap(_comp_pullback(self.f, phi.L, phi.t), _comp_pullback(self.g, phi.L, phi.t))

    def push(self, psi: "TargetAut") -> "QuadMap":
        (a, b), (c, d) = psi.N
        s1, s2 = psi.s
        f = [_norm(a * u + b * v) for u, v in zip(self.f, self.g)]
        g = [_norm(c * u + d * v) for u, v in zip(self.f, self.g)]
        f[9] = _norm(f[9] + s1)
        g[9] = _norm(g[9] + s2)
        return QuadMap(f, g)

    def conjugate(self, phi: "SourceAut", psi: "TargetAut") -> "QuadMap":
        """psi o F o phi."""
        return self.pullback(phi).push(psi)

    def apply_step(self, step: "Step") -> "QuadMap":
        return self.conjugate(step.phi, step.psi)

    def apply_chain(self, chain: Sequence["Step"]) -> "QuadMap":
        F = self
        for st in chain:
            F = F.apply_step(st)
        return F

    def evaluate(self, point):
        x = list(point) + [1]
        vals = []
        for a in self.components():
            mons = [x[0] * x[0], x[0] * x[1], x[0] * x[2], x[1] * x[1], x[1] * x[2],
                    x[2] * x[2], x[0], x[1], x[2], 1]
            vals.append(_norm(sum(c * m for c, m in zip(a, mons))))
        return tuple(vals)

    def lift_to(self, ctx) -> "QuadMap":
        def lf(v):
            return v.lift(ctx) if isinstance(v, TowerElem) else v
        return QuadMap([lf(v) for v in self.f], [lf(v) for v in self.g])

    def swap(self) -> "QuadMap":
        return QuadMap(self.g, self.f)

    # comparison/display -------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, QuadMap):
            return NotImplemented
        return all(u == v for u, v in zip(self.f + self.g, other.f + other.g))

    def __hash__(self):
        return hash(tuple(hash(v) for v in self.f + self.g))

    def __repr__(self):
        return f"QuadMap({self})"

    def __str__(self):
        f, g = self.to_polys()
        return f"({f}, {g})"

    def exprs(self) -> Tuple[str, str]:
        f, g = self.to_polys()
        return str(f), str(g)


def _poly_coeffs(p) -> tuple:
    if not isinstance(p, Poly):
        p = Poly.coerce(p)
    extra = [v for v in p.variables() if v not in XYZ]
    if extra:
        raise WrongVariables(f"unexpected variables {extra}")
    if p.degree() > 2:
        raise DegreeTooHigh("degree exceeds two")
    p = p.to_ring(merge_rings(XYZ, p.ring)).to_ring(XYZ)
    return tuple(p.terms.get(e, 0) for e in _EXPS)


def _coeffs_poly(a) -> Poly:
    return Poly(XYZ, {e: c for e, c in zip(_EXPS, a)})


def monomial_coeff(a, name: str):
    return a[MONOMIALS.index(name)]


# ---------------------------------------------------------------------------
# affine automorphisms


class SourceAut:
    """x -> L x + t on C^3."""

    __slots__ = ("L", "t")

    def __init__(self, L, t=(0, 0, 0), check: bool = True):
        self.L = [[_c(v) for v in row] for row in L]
        self.t = [_c(v) for v in t]
        if check and la.det(self.L) == 0:
            raise SingularTransformation("source transformation is not invertible")

    @classmethod
    def identity(cls) -> "SourceAut":
        return cls(la.identity(3))

    @classmethod
    def from_exprs(cls, exprs: Sequence) -> "SourceAut":
        """From three affine expressions in x, y, z (images of x, y, z)."""
        L, t = [], []
        for e in exprs:
            p = Poly.coerce(e)
            if p.degree() > 1:
                raise MapError("source map must be affine")
            p = p.to_ring(merge_rings(XYZ, p.ring)).to_ring(XYZ)
            L.append([p.terms.get(k, 0) for k in ((1, 0, 0), (0, 1, 0), (0, 0, 1))])
            t.append(p.terms.get((0, 0, 0), 0))
        return cls(L, t)

    def exprs(self) -> List[Poly]:
        out = []
        for row, c in zip(self.L, self.t):
            out.append(Poly(XYZ, {(1, 0, 0): row[0], (0, 1, 0): row[1], (0, 0, 1): row[2],
                                  (0, 0, 0): c}))
        return out

    def inverse(self) -> "SourceAut":
        Li = la.inverse(self.L)
        return SourceAut(Li, [_norm(-v) for v in la.matvec(Li, self.t)], check=False)

    def compose(self, other: "SourceAut") -> "SourceAut":
        """self o other."""
        L = la.matmul(self.L, other.L)
        t = [_norm(a + b) for a, b in zip(la.matvec(self.L, other.t), self.t)]
        return SourceAut(L, t, check=False)

    def is_identity(self) -> bool:
        return self.L == la.identity(3) and all(v == 0 for v in self.t)

    def __eq__(self, other):
        return isinstance(other, SourceAut) and self.L == other.L and self.t == other.t

    def __str__(self):
        return "(" + ", ".join(str(e) for e in self.exprs()) + ")"


class TargetAut:
    """(p, q) -> N (p, q) + s on C^2."""

    __slots__ = ("N", "s")

    def __init__(self, N, s=(0, 0), check: bool = True):
        self.N = [[_c(v) for v in row] for row in N]
        self.s = [_c(v) for v in s]
        if check and la.det(self.N) == 0:
            raise SingularTransformation("target transformation is not invertible")

    @classmethod
    def identity(cls) -> "TargetAut":
        return cls(la.identity(2))

    @classmethod
    def from_exprs(cls, exprs: Sequence) -> "TargetAut":
        N, s = [], []
        for e in exprs:
            p = Poly.coerce(e)
            if p.degree() > 1:
                raise MapError("target map must be affine")
            ring = ("p", "q")
            p = p.to_ring(merge_rings(ring, p.ring)).to_ring(ring)
            N.append([p.terms.get((1, 0), 0), p.terms.get((0, 1), 0)])
            s.append(p.terms.get((0, 0), 0))
        return cls(N, s)

    def exprs(self) -> List[Poly]:
        return [Poly(("p", "q"), {(1, 0): r[0], (0, 1): r[1], (0, 0): c})
                for r, c in zip(self.N, self.s)]

    def inverse(self) -> "TargetAut":
        Ni = la.inverse(self.N)
        return TargetAut(Ni, [_norm(-v) for v in la.matvec(Ni, self.s)], check=False)

    def compose(self, other: "TargetAut") -> "TargetAut":
        """self o other."""
        N = la.matmul(self.N, other.N)
        s = [_norm(a + b) for a, b in zip(la.matvec(self.N, other.s), self.s)]
        return TargetAut(N, s, check=False)

    def is_identity(self) -> bool:
        return self.N == la.identity(2) and all(v == 0 for v in self.s)

    def __eq__(self, other):
        return isinstance(other, TargetAut) and self.N == other.N and self.s == other.s

    def __str__(self):
        return "(" + ", ".join(str(e) for e in self.exprs()) + ")"


@dataclass
class Step:
    phi: SourceAut
    psi: TargetAut
    label: str = ""

    def inverse_apply(self, F: QuadMap) -> QuadMap:
        return F.conjugate(self.phi.inverse(), self.psi.inverse())

    def to_dict(self) -> dict:
        return {"label": self.label,
                "source": [str(e) for e in self.phi.exprs()],
                "target": [str(e) for e in self.psi.exprs()]}


def compose_chain(chain: Sequence[Step]) -> Step:
    """Single step equivalent to applying ``chain`` left to right."""
    phi = SourceAut.identity()
    psi = TargetAut.identity()
    for st in chain:
        phi = phi.compose(st.phi)
        psi = st.psi.compose(psi)
    return Step(phi, psi, "composite")


def replay_inverse(G: QuadMap, chain: Sequence[Step]) -> QuadMap:
    """Undo ``chain`` starting from its output ``G``."""
    H = G
    for st in reversed(chain):
        H = st.inverse_apply(H)
    return H


def verify_witness(F: QuadMap, G: QuadMap, chain: Sequence[Step]) -> bool:
    """True when applying the chain to F gives G and undoing it gives F back."""
    if F.apply_chain(chain) != G:
        return False
    return replay_inverse(G, chain) == F


def equivalent_under(F: QuadMap, G: QuadMap, phi: SourceAut, psi: TargetAut) -> bool:
    return F.conjugate(phi, psi) == G


# ---------------------------------------------------------------------------
# random transformations (for fuzzing)


@dataclass
class ConjugationBox:
    radius: int = 3
    gaussian: bool = True
    translations: bool = True


def _rand_scalar(rng: random.Random, box: ConjugationBox):
    re = rng.randint(-box.radius, box.radius)
    if box.gaussian:
        im = rng.randint(-box.radius, box.radius)
        if im:
            return TowerElem.gauss(re, im)
    return re


def random_source(rng: random.Random, box: ConjugationBox = ConjugationBox(),
                  linear_only: bool = False) -> SourceAut:
    while True:
        L = [[_rand_scalar(rng, box) for _ in range(3)] for _ in range(3)]
        if la.det(L) == 0:
            continue
        t = [0, 0, 0]
        if box.translations and not linear_only:
            t = [_rand_scalar(rng, box) for _ in range(3)]
        return SourceAut(L, t, check=False)


def random_target(rng: random.Random, box: ConjugationBox = ConjugationBox(),
                  linear_only: bool = False) -> TargetAut:
    while True:
        N = [[_rand_scalar(rng, box) for _ in range(2)] for _ in range(2)]
        if la.det(N) == 0:
            continue
        s = [0, 0]
        if box.translations and not linear_only:
            s = [_rand_scalar(rng, box) for _ in range(2)]
        return TargetAut(N, s, check=False)


def random_conjugate(F: QuadMap, rng: random.Random, box: ConjugationBox = ConjugationBox(),
                     linear_only: bool = False):
    phi = random_source(rng, box, linear_only)
    psi = random_target(rng, box, linear_only)
    return F.conjugate(phi, psi), phi, psi


def mp(f, g) -> QuadMap:
    """Shorthand: QuadMap from polynomial expressions or strings."""
    from .parse import parse_poly

    if isinstance(f, str):
        f = parse_poly(f)
    if isinstance(g, str):
        g = parse_poly(g)
    return QuadMap.from_polys(f, g)
