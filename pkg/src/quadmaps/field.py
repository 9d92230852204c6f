"""Exact arithmetic in radical towers over the Gaussian rationals.

A tower is a chain of contexts.  Level 0 is Q(i); above it sits at most one
cubic level (only directly over Q(i)) and any number of quadratic levels, up
to a configurable depth.  Elements are stored as nested coordinate tuples
("raw" values) whose leaves are pairs of Fractions (real, imaginary).

Zero divisors can only appear when a radicand that was assumed non-square is
in fact a square.  The inverse routine detects this, and raises
InconsistentTower carrying the witnessed square root; a Session replays the
computation with that root remembered (dynamic evaluation).
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math
from fractions import Fraction
from math import isqrt
from numbers import Rational
from typing import Callable, Optional

import mpmath

ZERO = Fraction(0)
ONE = Fraction(1)


class FieldError(ArithmeticError):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


class IncompatibleTowers(FieldError):
    pass


class TowerDepthExceeded(FieldError):
    pass


class CubicNotAllowed(FieldError):
    """A cube root was needed that the field policy cannot provide."""


class InconsistentTower(FieldError):
    """A zero divisor exposed a redundant quadratic level.

    ``ctx`` is the offending level, ``root`` the raw square root of its
    radicand in ``ctx.parent``.
    """

    def __init__(self, ctx: "TowerCtx", root):
        super().__init__(f"radicand of level {ctx.depth} is a square")
        self.ctx = ctx
        self.root = root


class _NeedCubicFirst(FieldError):
    def __init__(self, poly):
        super().__init__("cubic level must be adjoined first")
        self.poly = poly


@dataclass(frozen=True)
class FieldPolicy:
    max_depth: int = 6
    allow_cubic: bool = True


DEFAULT_POLICY = FieldPolicy()


def _rat_sqrt(r: Fraction) -> Optional[Fraction]:
    if r < 0:
        return None
    n, d = r.numerator, r.denominator
    a, b = isqrt(n), isqrt(d)
    if a * a == n and b * b == d:
        return Fraction(a, b)
    return None


def _icbrt(n: int) -> int:
    if n < 0:
        return -_icbrt(-n)
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + 2) // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            break
        x = y
    while x * x * x > n:
        x -= 1
    while (x + 1) ** 3 <= n:
        x += 1
    return x


class TowerCtx:
    """One level of a radical tower.  Immutable."""

    __slots__ = ("parent", "kind", "data", "depth", "key", "degree", "_zero", "_one")

    def __init__(self, parent: Optional["TowerCtx"], kind: str, data=None):
        self.parent = parent
        self.kind = kind
        self.data = data
        if parent is None:
            self.depth = 0
            self.key = ("Qi",)
            self.degree = 2
            self._zero = (ZERO, ZERO)
            self._one = (ONE, ZERO)
        else:
            self.depth = parent.depth + 1
            self.key = (parent.key, kind, data)
            n = 2 if kind == "sqrt" else 3
            self.degree = n
            self._zero = (parent._zero,) * n
            self._one = (parent._one,) + (parent._zero,) * (n - 1)

    def __repr__(self):
        return f"TowerCtx(depth={self.depth}, kinds={self.kinds()})"

    def kinds(self):
        out, c = [], self
        while c is not None:
            out.append(c.kind)
            c = c.parent
        return list(reversed(out))

    def chain(self):
        out, c = [], self
        while c is not None:
            out.append(c)
            c = c.parent
        return list(reversed(out))

    def has_cubic(self) -> bool:
        return any(c.kind == "cubic" for c in self.chain())

    def is_ancestor_of(self, other: "TowerCtx") -> bool:
        c = other
        while c is not None:
            if c is self or c.key == self.key:
                return True
            c = c.parent
        return False

    # construction -------------------------------------------------------
    def extend_sqrt(self, radicand_raw, max_depth: int = 6) -> "TowerCtx":
        if self.depth + 1 > max_depth:
            raise TowerDepthExceeded(f"tower depth bound {max_depth} exceeded")
        if self.is_zero(radicand_raw):
            raise FieldError("zero radicand")
        return TowerCtx(self, "sqrt", radicand_raw)

    def extend_cubic(self, coeffs_raw) -> "TowerCtx":
        """Adjoin a root of t^3 + c2 t^2 + c1 t + c0 (coeffs_raw = (c0, c1, c2))."""
        if self.depth != 0:
            raise FieldError("cubic level is only allowed directly over Q(i)")
        cs = [TowerElem(self, c) for c in coeffs_raw] + [TowerElem(self, self._one)]
        if gaussian_rational_roots(cs):
            raise FieldError("cubic has a root in Q(i)")
        return TowerCtx(self, "cubic", tuple(coeffs_raw))

    def gen(self) -> "TowerElem":
        if self.parent is None:
            return TowerElem(self, (ZERO, ONE))
        p = self.parent
        return TowerElem(self, (p._zero, p._one) + (p._zero,) * (self.degree - 2))

    # raw arithmetic -------------------------------------------------------
    def is_zero(self, a) -> bool:
        if self.parent is None:
            return a[0] == 0 and a[1] == 0
        pz = self.parent.is_zero
        return all(pz(c) for c in a)

    def add(self, a, b):
        if self.parent is None:
            return (a[0] + b[0], a[1] + b[1])
        pa = self.parent.add
        return tuple(pa(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        if self.parent is None:
            return (a[0] - b[0], a[1] - b[1])
        ps = self.parent.sub
        return tuple(ps(x, y) for x, y in zip(a, b))

    def neg(self, a):
        if self.parent is None:
            return (-a[0], -a[1])
        pn = self.parent.neg
        return tuple(pn(x) for x in a)

    def scale(self, a, r: Fraction):
        if self.parent is None:
            return (a[0] * r, a[1] * r)
        ps = self.parent.scale
        return tuple(ps(x, r) for x in a)

    def mul(self, a, b):
        if self.parent is None:
            a0, a1 = a
            b0, b1 = b
            return (a0 * b0 - a1 * b1, a0 * b1 + a1 * b0)
        P = self.parent
        if self.kind == "sqrt":
            D = self.data
            a0, a1 = a
            b0, b1 = b
            return (
                P.add(P.mul(a0, b0), P.mul(D, P.mul(a1, b1))),
                P.add(P.mul(a0, b1), P.mul(a1, b0)),
            )
        # cubic: theta^3 = -(c0 + c1 theta + c2 theta^2)
        c0, c1, c2 = self.data
        prod = [P._zero] * 5
        for i in range(3):
            if P.is_zero(a[i]):
                continue
            for j in range(3):
                prod[i + j] = P.add(prod[i + j], P.mul(a[i], b[j]))
        for k in (4, 3):
            h = prod[k]
            if P.is_zero(h):
                continue
            prod[k] = P._zero
            prod[k - 3] = P.sub(prod[k - 3], P.mul(h, c0))
            prod[k - 2] = P.sub(prod[k - 2], P.mul(h, c1))
            prod[k - 1] = P.sub(prod[k - 1], P.mul(h, c2))
        return tuple(prod[:3])

    def inv(self, a):
        if self.parent is None:
            n = a[0] * a[0] + a[1] * a[1]
            if n == 0:
                raise DivisionByZero("division by zero")
            return (a[0] / n, -a[1] / n)
        P = self.parent
        if self.kind == "sqrt":
            a0, a1 = a
            N = P.sub(P.mul(a0, a0), P.mul(self.data, P.mul(a1, a1)))
            if P.is_zero(N):
                if P.is_zero(a1):
                    raise DivisionByZero("division by zero")
                raise InconsistentTower(self, P.div(a0, a1))
            Ni = P.inv(N)
            return (P.mul(a0, Ni), P.neg(P.mul(a1, Ni)))
        if self.is_zero(a):
            raise DivisionByZero("division by zero")
        # solve a * u = 1 via the 3x3 multiplication matrix over the base
        cols = []
        for k in range(3):
            e = [P._zero] * 3
            e[k] = P._one
            cols.append(self.mul(a, tuple(e)))
        M = [[cols[j][i] for j in range(3)] + [P._one if i == 0 else P._zero] for i in range(3)]
        for c in range(3):
            piv = next(r for r in range(c, 3) if not P.is_zero(M[r][c]))
            M[c], M[piv] = M[piv], M[c]
            iv = P.inv(M[c][c])
            M[c] = [P.mul(v, iv) for v in M[c]]
            for r in range(3):
                if r != c and not P.is_zero(M[r][c]):
                    f = M[r][c]
                    M[r] = [P.sub(v, P.mul(f, w)) for v, w in zip(M[r], M[c])]
        return tuple(M[i][3] for i in range(3))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def lift_from(self, raw, src: "TowerCtx"):
        """Embed a raw value of ancestor ``src`` into this context."""
        if src.depth == self.depth:
            return raw
        below = self.parent.lift_from(raw, src)
        return (below,) + (self.parent._zero,) * (self.degree - 1)

    def norm_to_base(self, a):
        """Norm of a raw element down to Q(i) (product over conjugates)."""
        if self.parent is None:
            return a
        P = self.parent
        if self.kind == "sqrt":
            a0, a1 = a
            return P.norm_to_base(P.sub(P.mul(a0, a0), P.mul(self.data, P.mul(a1, a1))))
        cols = []
        for k in range(3):
            e = [P._zero] * 3
            e[k] = P._one
            cols.append(self.mul(a, tuple(e)))
        m = [[cols[j][i] for j in range(3)] for i in range(3)]
        det = P.sub(
            P.add(
                P.mul(m[0][0], P.sub(P.mul(m[1][1], m[2][2]), P.mul(m[1][2], m[2][1]))),
                P.mul(m[0][2], P.sub(P.mul(m[1][0], m[2][1]), P.mul(m[1][1], m[2][0]))),
            ),
            P.mul(m[0][1], P.sub(P.mul(m[1][0], m[2][2]), P.mul(m[1][2], m[2][0]))),
        )
        return det

    # square roots -----------------------------------------------------------
    def find_sqrt(self, a):
        """Raw square root of ``a`` in this context, or None if none was found."""
        if self.parent is None:
            return _gauss_sqrt(a)
        P = self.parent
        if self.kind == "cubic":
            if P.is_zero(a[1]) and P.is_zero(a[2]):
                r = P.find_sqrt(a[0])
                return None if r is None else (r, P._zero, P._zero)
            return None
        a0, a1 = a
        D = self.data
        if P.is_zero(a1):
            r = P.find_sqrt(a0)
            if r is not None:
                return (r, P._zero)
            r = P.find_sqrt(P.div(a0, D))
            if r is not None:
                return (P._zero, r)
            return None
        N = P.sub(P.mul(a0, a0), P.mul(D, P.mul(a1, a1)))
        n = P.find_sqrt(N)
        if n is None:
            return None
        for s in (n, P.neg(n)):
            h = P.scale(P.add(a0, s), Fraction(1, 2))
            if P.is_zero(h):
                continue
            c = P.find_sqrt(h)
            if c is None:
                continue
            d = P.div(a1, P.scale(c, Fraction(2)))
            cand = (c, d)
            if self.mul(cand, cand) == a or self._raw_eq(self.mul(cand, cand), a):
                return cand
        return None

    def _raw_eq(self, a, b):
        return self.is_zero(self.sub(a, b))

    def descend(self, raw):
        """Lowest ancestor context containing ``raw``, with the raw value there."""
        ctx, r = self, raw
        while ctx.parent is not None:
            P = ctx.parent
            if all(P.is_zero(c) for c in r[1:]):
                ctx, r = P, r[0]
            else:
                break
        return ctx, r

    # formatting ---------------------------------------------------------------
    def fmt(self, a) -> str:
        if self.parent is None:
            return _fmt_gauss(a)
        P = self.parent
        name = self.gen_name()
        parts = []
        for k, c in enumerate(a):
            if P.is_zero(c):
                continue
            s = P.fmt(c)
            if k == 0:
                parts.append(s)
            else:
                mon = name if k == 1 else f"{name}^{k}"
                if s == "1":
                    parts.append(mon)
                elif s == "-1":
                    parts.append("-" + mon)
                else:
                    parts.append(f"({s})*{mon}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")

    def describe(self) -> str:
        """Q(i) followed by the adjoined generators, e.g. ``Q(i)(sqrt(2))``."""
        gens = []
        for c in self.chain()[1:]:
            if c.kind == "sqrt":
                gens.append(c.gen_name())
            else:
                terms = ["t^3"]
                for k, v in ((2, c.data[2]), (1, c.data[1]), (0, c.data[0])):
                    if not c.parent.is_zero(v):
                        mono = {2: "*t^2", 1: "*t", 0: ""}[k]
                        terms.append(f"({c.parent.fmt(v)}){mono}")
                gens.append(f"{c.gen_name()}: root of {' + '.join(terms)}")
        return "Q(i)" + "".join(f"({g})" for g in gens)

    def gen_name(self) -> str:
        if self.kind == "sqrt":
            return f"sqrt({self.parent.fmt(self.data)})"
        return f"theta{self.depth}"


def _fmt_frac(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def _fmt_gauss(a) -> str:
    re, im = a
    if im == 0:
        return _fmt_frac(re)
    ims = "i" if im == 1 else "-i" if im == -1 else f"{_fmt_frac(im)}*i"
    if re == 0:
        return ims
    if im < 0:
        return f"{_fmt_frac(re)}{ims}" if ims.startswith("-") else f"{_fmt_frac(re)}+{ims}"
    return f"{_fmt_frac(re)}+{ims}"


def _gauss_sqrt(a):
    re, im = a
    if re == 0 and im == 0:
        return (ZERO, ZERO)
    n = _rat_sqrt(re * re + im * im)
    if n is None:
        return None
    x2 = (re + n) / 2
    y2 = (n - re) / 2
    x = _rat_sqrt(x2)
    y = _rat_sqrt(y2)
    if x is None or y is None:
        return None
    if x != 0:
        y = im / (2 * x)
    return (x, y)


BASE = TowerCtx(None, "Qi")


def _coerce_raw(v):
    """Raw base value for an int/Fraction/complex-like scalar, or None."""
    if isinstance(v, bool):
        v = int(v)
    if isinstance(v, (int, Fraction)):
        return (Fraction(v), ZERO)
    if isinstance(v, Rational):
        return (Fraction(v.numerator, v.denominator), ZERO)
    return None


class TowerElem:
    """An element of a radical tower over Q(i)."""

    __slots__ = ("ctx", "c")

    def __init__(self, ctx: TowerCtx, coords):
        self.ctx = ctx
        self.c = coords

    # construction
    @classmethod
    def gauss(cls, re, im=0) -> "TowerElem":
        return cls(BASE, (Fraction(re), Fraction(im)))

    @classmethod
    def coerce(cls, v, ctx: TowerCtx = BASE) -> "TowerElem":
        if isinstance(v, TowerElem):
            return v
        r = _coerce_raw(v)
        if r is None:
            if isinstance(v, complex):
                return cls(BASE, (Fraction(v.real), Fraction(v.imag)))
            raise TypeError(f"cannot coerce {v!r} to a tower element")
        return cls(ctx, ctx.lift_from(r, BASE)) if ctx is not BASE else cls(BASE, r)

    # context alignment
    def _unify(self, other):
        if isinstance(other, TowerElem):
            a, b = self.ctx, other.ctx
            if a is b:
                return a, self.c, other.c
            if a.is_ancestor_of(b):
                return b, b.lift_from(self.c, _find_ancestor(b, a)), other.c
            if b.is_ancestor_of(a):
                return a, self.c, a.lift_from(other.c, _find_ancestor(a, b))
            ca, ra = a.descend(self.c)
            cb, rb = b.descend(other.c)
            if ca.is_ancestor_of(cb):
                return cb, cb.lift_from(ra, _find_ancestor(cb, ca)), rb
            if cb.is_ancestor_of(ca):
                return ca, ra, ca.lift_from(rb, _find_ancestor(ca, cb))
            e = _embed(cb, rb, a)
            if e is not None:
                return a, self.c, e
            e = _embed(ca, ra, b)
            if e is not None:
                return b, e, other.c
            raise IncompatibleTowers("elements live in unrelated towers")
        r = _coerce_raw(other)
        if r is None:
            return NotImplemented
        return self.ctx, self.c, self.ctx.lift_from(r, BASE)

    def lift(self, ctx: TowerCtx) -> "TowerElem":
        if ctx is self.ctx:
            return self
        if self.ctx.is_ancestor_of(ctx):
            return TowerElem(ctx, ctx.lift_from(self.c, _find_ancestor(ctx, self.ctx)))
        low, r = self.ctx.descend(self.c)
        if low.is_ancestor_of(ctx):
            return TowerElem(ctx, ctx.lift_from(r, _find_ancestor(ctx, low)))
        e = _embed(low, r, ctx)
        if e is not None:
            return TowerElem(ctx, e)
        raise IncompatibleTowers("cannot embed element")

    def descended(self) -> "TowerElem":
        low, r = self.ctx.descend(self.c)
        return TowerElem(low, r)

    # predicates
    def is_zero(self) -> bool:
        return self.ctx.is_zero(self.c)

    def is_base(self) -> bool:
        return self.ctx.descend(self.c)[0].depth == 0

    def base_value(self):
        low, r = self.ctx.descend(self.c)
        if low.depth != 0:
            return None
        return r

    def is_rational(self) -> bool:
        r = self.base_value()
        return r is not None and r[1] == 0

    def __bool__(self):
        return not self.is_zero()

    # arithmetic
    def __add__(self, o):
        u = self._unify(o)
        if u is NotImplemented:
            return NotImplemented
        ctx, a, b = u
        return TowerElem(ctx, ctx.add(a, b))

    __radd__ = __add__

    def __sub__(self, o):
        u = self._unify(o)
        if u is NotImplemented:
            return NotImplemented
        ctx, a, b = u
        return TowerElem(ctx, ctx.sub(a, b))

    def __rsub__(self, o):
        u = self._unify(o)
        if u is NotImplemented:
            return NotImplemented
        ctx, a, b = u
        return TowerElem(ctx, ctx.sub(b, a))

    def __neg__(self):
        return TowerElem(self.ctx, self.ctx.neg(self.c))

    def __pos__(self):
        return self

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)) and not isinstance(o, bool):
            return TowerElem(self.ctx, self.ctx.scale(self.c, Fraction(o)))
        u = self._unify(o)
        if u is NotImplemented:
            return NotImplemented
        ctx, a, b = u
        return TowerElem(ctx, ctx.mul(a, b))

    __rmul__ = __mul__

    def inverse(self) -> "TowerElem":
        return TowerElem(self.ctx, self.ctx.inv(self.c))

    def __truediv__(self, o):
        if isinstance(o, (int, Fraction)) and not isinstance(o, bool):
            if o == 0:
                raise DivisionByZero("division by zero")
            return TowerElem(self.ctx, self.ctx.scale(self.c, 1 / Fraction(o)))
        u = self._unify(o)
        if u is NotImplemented:
            return NotImplemented
        ctx, a, b = u
        return TowerElem(ctx, ctx.div(a, b))

    def __rtruediv__(self, o):
        u = self._unify(o)
        if u is NotImplemented:
            return NotImplemented
        ctx, a, b = u
        return TowerElem(ctx, ctx.div(b, a))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = TowerElem(self.ctx, self.ctx._one)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, o):
        try:
            u = self._unify(o)
        except IncompatibleTowers:
            return False
        if u is NotImplemented:
            return NotImplemented
        ctx, a, b = u
        return ctx.is_zero(ctx.sub(a, b))

    def __hash__(self):
        low, r = self.ctx.descend(self.c)
        if low.depth == 0:
            if r[1] == 0:
                return hash(r[0])
            return hash(r)
        # equal elements may sit in different towers (see _embed), so the
        # hash cannot depend on the tower
        return hash("tower")

    def conj_i(self) -> "TowerElem":
        """Complex conjugation on base elements only."""
        r = self.base_value()
        if r is None:
            raise FieldError("conjugation is only defined on Q(i)")
        return TowerElem(BASE, (r[0], -r[1]))

    def __repr__(self):
        return f"TowerElem({self})"

    def __str__(self):
        return self.ctx.fmt(self.c)

    def to_complex(self, dps: int = 30):
        """Numerical value under the principal-branch embedding."""
        return _numeric(self.ctx, self.c, dps)


def _find_ancestor(ctx: TowerCtx, anc: TowerCtx) -> TowerCtx:
    c = ctx
    while c is not None:
        if c is anc or c.key == anc.key:
            return c
        c = c.parent
    raise IncompatibleTowers("not an ancestor")


def _embed(src: TowerCtx, raw, dst: TowerCtx):
    """Map ``raw`` from ``src`` into ``dst`` by matching each generator with a
    level of ``dst`` that has the same defining data; None when one is missing."""
    src, raw = src.descend(raw)
    if src.parent is None:
        return dst.lift_from(raw, src)
    for lvl in dst.chain()[1:]:
        if lvl.kind != src.kind:
            continue
        if src.kind == "sqrt":
            rad = _embed(src.parent, src.data, lvl.parent)
            if rad is None or not lvl.parent.is_zero(lvl.parent.sub(rad, lvl.data)):
                continue
        elif src.data != lvl.data:
            continue
        parts = [_embed(src.parent, c, lvl.parent) for c in raw]
        if any(p is None for p in parts):
            continue
        return dst.lift_from(tuple(parts), lvl)
    return None


def _numeric(ctx: TowerCtx, raw, dps: int):
    with mpmath.workdps(dps):
        if ctx.parent is None:
            return mpmath.mpc(mpmath.mpf(raw[0].numerator) / raw[0].denominator,
                              mpmath.mpf(raw[1].numerator) / raw[1].denominator)
        P = ctx.parent
        g = _gen_numeric(ctx, dps)
        return sum((_numeric(P, c, dps) * g ** k for k, c in enumerate(raw)), mpmath.mpc(0))


def _gen_numeric(ctx: TowerCtx, dps: int):
    P = ctx.parent
    if ctx.kind == "sqrt":
        return mpmath.sqrt(_numeric(P, ctx.data, dps))
    c0, c1, c2 = (_numeric(P, c, dps) for c in ctx.data)
    return mpmath.polyroots([1, c2, c1, c0], maxsteps=200, extraprec=dps)[0]


def elem(v) -> TowerElem:
    return TowerElem.coerce(v)


I = TowerElem.gauss(0, 1)


def is_zero(e) -> bool:
    if isinstance(e, TowerElem):
        return e.is_zero()
    return e == 0


# ---------------------------------------------------------------------------
# root extraction with a session (dynamic evaluation)


class Session:
    """Working context for one computation.

    All extensions are stacked on a single chain so that every element built
    during the computation lives in a common tower.  Square roots witnessed by
    InconsistentTower are remembered across replays.
    """

    def __init__(self, policy: FieldPolicy = DEFAULT_POLICY):
        self.policy = policy
        self.known_roots: dict = {}
        self.cubic_first = None
        self.ctx = BASE
        self.replays = 0

    def reset(self):
        self.ctx = BASE
        if self.cubic_first is not None:
            self.ctx = BASE.extend_cubic(self.cubic_first)

    def absorb(self, e: TowerElem) -> TowerElem:
        """Lift ``e`` into the session context, widening it if needed."""
        if self.ctx.is_ancestor_of(e.ctx):
            self.ctx = e.ctx
            return e
        return e.lift(self.ctx)

    def sqrt(self, e) -> TowerElem:
        e = self.absorb(TowerElem.coerce(e))
        if e.is_zero():
            return e
        low, r = e.ctx.descend(e.c)
        key = (low.key, r)
        if key in self.known_roots:
            rctx, rr = self.known_roots[key]
            return TowerElem(rctx, rr).lift(self.ctx)
        found = self.ctx.find_sqrt(e.c)
        if found is not None:
            return TowerElem(self.ctx, found)
        base = e.base_value()
        if base is not None:
            split = _rationalize_radicand(base)
            if split is not None:
                u, m0, scale = split
                if m0 < 0:
                    u, m0 = BASE.mul(u, (ZERO, Fraction(1))), -m0
                g = self._plain_sqrt(TowerElem(BASE, (Fraction(m0), ZERO)))
                root = g * TowerElem(BASE, u) * scale
                if root * root == e:
                    return root
        return self._plain_sqrt(e)

    def _plain_sqrt(self, e: TowerElem) -> TowerElem:
        e = self.absorb(e)
        found = self.ctx.find_sqrt(e.c)
        if found is not None:
            return TowerElem(self.ctx, found)
        self.ctx = self.ctx.extend_sqrt(e.c, self.policy.max_depth)
        return self.ctx.gen()

    def cbrt(self, e) -> TowerElem:
        e = self.absorb(TowerElem.coerce(e))
        base = e.base_value()
        if base is not None:
            r = _gauss_cbrt(base)
            if r is not None:
                return TowerElem(BASE, r).lift(self.ctx)
        if not self.policy.allow_cubic or base is None:
            raise CubicNotAllowed("cube root outside the field policy")
        poly = (BASE.neg(base), BASE._zero, BASE._zero)
        if self.ctx.kind == "cubic" and self.ctx.data == poly:
            return self.ctx.gen()
        if self.ctx.depth == 0:
            self.ctx = BASE.extend_cubic(poly)
            return self.ctx.gen()
        if self.cubic_first is None and not self.ctx.has_cubic():
            raise _NeedCubicFirst(poly)
        raise CubicNotAllowed("only one cubic level is allowed")

    def adjoin_cubic_root(self, coeffs_raw) -> TowerElem:
        """Root of a rootless monic cubic over Q(i) (coeffs_raw = (c0, c1, c2))."""
        if not self.policy.allow_cubic:
            raise CubicNotAllowed("cubic extensions disabled by policy")
        coeffs_raw = tuple(coeffs_raw)
        if self.ctx.kind == "cubic" and self.ctx.data == coeffs_raw:
            return self.ctx.gen()
        for c in self.ctx.chain():
            if c.kind == "cubic" and c.data == coeffs_raw:
                return TowerElem(c, c.gen().c).lift(self.ctx)
        if self.ctx.depth == 0:
            self.ctx = BASE.extend_cubic(coeffs_raw)
            return self.ctx.gen()
        if self.cubic_first is None and not self.ctx.has_cubic():
            raise _NeedCubicFirst(coeffs_raw)
        raise CubicNotAllowed("only one cubic level is allowed")

    def run(self, fn: Callable[["Session"], object], max_replays: int = 20):
        """Run ``fn(self)`` with dynamic-evaluation replays."""
        while True:
            self.reset()
            try:
                return fn(self)
            except InconsistentTower as exc:
                lvl = exc.ctx
                low, r = lvl.parent.descend(lvl.data)
                root_ctx, root = lvl.parent.descend(exc.root)
                self.known_roots[(low.key, r)] = (root_ctx, root)
            except _NeedCubicFirst as exc:
                self.cubic_first = exc.poly
            self.replays += 1
            if self.replays > max_replays:
                raise FieldError("too many replays")


def _squarefree_split(m: int, bound: int = 1000):
    """m = s^2 * m0 with small square factors removed."""
    s = 1
    sign = -1 if m < 0 else 1
    m = abs(m)
    r = math.isqrt(m)
    if r * r == m:
        return r, sign
    p = 2
    while p <= bound and p * p <= m:
        while m % (p * p) == 0:
            m //= p * p
            s *= p
        p += 1
    return s, sign * m


def _rationalize_radicand(raw):
    """Write a Gaussian rational as u^2 * m0 * scale^2 with m0 a rational integer.

    Returns (u_raw, m0, scale) or None when the norm is not a rational square.
    """
    a, b = raw
    n = _rat_sqrt(a * a + b * b)
    if n is None:
        return None
    if b == 0:
        u = (Fraction(1), ZERO)
        d = a
    else:
        u = (a + n, b)
        d = 1 / (2 * (a + n))
    P, Q = d.numerator, d.denominator
    s, m0 = _squarefree_split(P * Q)
    return u, m0, Fraction(s, Q)


def sqrt(e, policy: FieldPolicy = DEFAULT_POLICY):
    """Square root of ``e``; returns (root, ctx).  Extends the tower if needed."""
    e = TowerElem.coerce(e)
    if e.is_zero():
        return e, e.ctx
    found = e.ctx.find_sqrt(e.c)
    if found is not None:
        return TowerElem(e.ctx, found), e.ctx
    ctx = e.ctx.extend_sqrt(e.c, policy.max_depth)
    return ctx.gen(), ctx


# ---------------------------------------------------------------------------
# Gaussian-rational roots


def _gauss_int_parts(raws):
    """Scale Gaussian-rational raws to Gaussian integers (list of (re, im) ints)."""
    from math import lcm

    d = 1
    for re, im in raws:
        d = lcm(d, re.denominator, im.denominator)
    return [(int(re * d), int(im * d)) for re, im in raws]


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gauss_cbrt(raw):
    re, im = raw
    if re == 0 and im == 0:
        return (ZERO, ZERO)
    from math import lcm

    d = lcm(re.denominator, im.denominator)
    # e = m / d^3 with m Gaussian integer
    m = (int(re * d ** 3), int(im * d ** 3))
    n = m[0] * m[0] + m[1] * m[1]
    k = _icbrt(n)
    if k ** 3 != n:
        return None
    bits = max(n.bit_length(), 8)
    with mpmath.workdps(bits // 3 + 30):
        z = mpmath.mpc(m[0], m[1])
        r0 = mpmath.cbrt(z)
        w = mpmath.exp(2j * mpmath.pi / 3)
        for j in range(3):
            c = r0 * w ** j
            u = (int(mpmath.nint(c.real)), int(mpmath.nint(c.imag)))
            if _gmul(_gmul(u, u), u) == m:
                return (Fraction(u[0], d), Fraction(u[1], d))
    return None


def gaussian_rational_roots(coeffs) -> list:
    """Distinct roots in Q(i) of sum coeffs[k] t^k (coefficients in Q(i))."""
    raws = []
    for c in coeffs:
        c = TowerElem.coerce(c)
        b = c.base_value()
        if b is None:
            raise FieldError("coefficients must lie in Q(i)")
        raws.append(b)
    while raws and raws[-1] == (ZERO, ZERO):
        raws.pop()
    n = len(raws) - 1
    if n < 1:
        return []
    roots = []
    if raws[0] == (ZERO, ZERO):
        roots.append(TowerElem(BASE, (ZERO, ZERO)))
        k = 0
        while raws[k] == (ZERO, ZERO):
            k += 1
        raws = raws[k:]
        n = len(raws) - 1
        if n < 1:
            return roots
    ints = _gauss_int_parts(raws)
    lead = ints[-1]
    size = max(abs(v) for c in ints for v in c).bit_length()
    dps = 30 + size
    with mpmath.workdps(dps):
        cs = [mpmath.mpc(a, b) for a, b in reversed(ints)]
        approx = None
        for extra in (dps, 4 * dps, 16 * dps):
            try:
                approx = mpmath.polyroots(cs, maxsteps=400, extraprec=extra)
                break
            except mpmath.libmp.NoConvergence:
                continue
        if approx is None:
            raise FieldError("root isolation failed")
        lead_c = mpmath.mpc(lead[0], lead[1])
        for r in approx:
            u = lead_c * r
            ug = (int(mpmath.nint(u.real)), int(mpmath.nint(u.imag)))
            # root candidate ug / lead
            ln = lead[0] * lead[0] + lead[1] * lead[1]
            num = _gmul(ug, (lead[0], -lead[1]))
            cand = (Fraction(num[0], ln), Fraction(num[1], ln))
            val = (ZERO, ZERO)
            for c in reversed(raws):
                val = BASE.add(BASE.mul(val, cand), c)
            if val == (ZERO, ZERO):
                e = TowerElem(BASE, cand)
                if e not in roots:
                    roots.append(e)
    return roots
