"""Sparse multivariate polynomials with exact coefficients.

Coefficients are duck-typed: ``int``, ``Fraction`` or ``TowerElem`` values may
be mixed freely.  Variables are named; rings are unified automatically using a
fixed global variable order.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .field import TowerElem, DivisionByZero

VAR_ORDER = ["x", "y", "z", "p", "q", "t", "s", "u", "v", "w", "A", "B",
             "alpha", "beta", "lambda", "mu", "a", "b", "c"]
_POS = {n: i for i, n in enumerate(VAR_ORDER)}


class PolyError(ValueError):
    pass


class RingMismatch(PolyError):
    pass


class NotUnivariate(PolyError):
    pass


class DegreeUnsupported(PolyError):
    pass


class NotDivisible(PolyError):
    pass


def _order_key(name: str):
    return (_POS.get(name, len(VAR_ORDER)), name)


def merge_rings(*rings: Sequence[str]) -> Tuple[str, ...]:
    names = set()
    for r in rings:
        names.update(r)
    return tuple(sorted(names, key=_order_key))


def _norm(c):
    """Cheapest exact representation of a scalar."""
    if isinstance(c, TowerElem):
        r = c.base_value()
        if r is not None and c.ctx.depth == 0:
            if r[1] == 0:
                v = r[0]
                return v.numerator if v.denominator == 1 else v
        return c
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def is_scalar(c) -> bool:
    return isinstance(c, (int, Fraction, TowerElem)) and not isinstance(c, bool)


class Poly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: Sequence[str], terms: Mapping[Tuple[int, ...], object] | None = None):
        self.ring = tuple(ring)
        d = {}
        if terms:
            for e, c in terms.items():
                if not (c == 0):
                    d[tuple(e)] = c
        self.terms: Dict[Tuple[int, ...], object] = d

    # construction --------------------------------------------------------
    @classmethod
    def const(cls, c, ring: Sequence[str] = ()) -> "Poly":
        return cls(ring, {(0,) * len(ring): c})

    @classmethod
    def var(cls, name: str, ring: Sequence[str] | None = None) -> "Poly":
        ring = tuple(ring) if ring is not None else (name,)
        if name not in ring:
            ring = merge_rings(ring, (name,))
        e = [0] * len(ring)
        e[ring.index(name)] = 1
        return cls(ring, {tuple(e): 1})

    @classmethod
    def from_univariate(cls, coeffs: Sequence, var: str) -> "Poly":
        return cls((var,), {(k,): c for k, c in enumerate(coeffs)})

    @classmethod
    def coerce(cls, v, ring: Sequence[str] = ()) -> "Poly":
        if isinstance(v, Poly):
            return v
        if is_scalar(v):
            return cls.const(v, ring)
        raise TypeError(f"cannot make a polynomial from {v!r}")

    # ring handling ---------------------------------------------------------
    def to_ring(self, ring: Sequence[str]) -> "Poly":
        ring = tuple(ring)
        if ring == self.ring:
            return self
        idx = []
        for n in self.ring:
            if n not in ring:
                if any(e[self.ring.index(n)] for e in self.terms):
                    raise RingMismatch(f"variable {n} missing from target ring")
                idx.append(None)
            else:
                idx.append(ring.index(n))
        out = {}
        k = len(ring)
        for e, c in self.terms.items():
            ne = [0] * k
            for i, j in zip(e, idx):
                if j is not None:
                    ne[j] = i
            out[tuple(ne)] = c
        return Poly(ring, out)

    def _align(self, other: "Poly"):
        if self.ring == other.ring:
            return self, other
        r = merge_rings(self.ring, other.ring)
        return self.to_ring(r), other.to_ring(r)

    def variables(self) -> Tuple[str, ...]:
        used = []
        for i, n in enumerate(self.ring):
            if any(e[i] for e in self.terms):
                used.append(n)
        return tuple(used)

    def trim(self) -> "Poly":
        return self.to_ring(self.variables())

    # predicates ---------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(not any(e) for e in self.terms)

    def const_value(self):
        if not self.is_const():
            raise PolyError("not a constant")
        for c in self.terms.values():
            return c
        return 0

    def __bool__(self):
        return bool(self.terms)

    # arithmetic ---------------------------------------------------------------
    def __add__(self, other):
        if is_scalar(other):
            other = Poly.const(other, self.ring)
        elif not isinstance(other, Poly):
            return NotImplemented
        a, b = self._align(other)
        d = dict(a.terms)
        for e, c in b.terms.items():
            if e in d:
                s = d[e] + c
                if s == 0:
                    del d[e]
                else:
                    d[e] = s
            else:
                d[e] = c
        out = Poly(a.ring)
        out.terms = d
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Poly(self.ring)
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if is_scalar(other):
            other = Poly.const(other, self.ring)
        elif not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        if c == 0:
            return Poly(self.ring)
        out = Poly(self.ring)
        out.terms = {e: _norm(v * c) for e, v in self.terms.items()}
        out.terms = {e: v for e, v in out.terms.items() if not (v == 0)}
        return out

    def __mul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self._align(other)
        d: Dict[Tuple[int, ...], object] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                v = c1 * c2
                if e in d:
                    d[e] = d[e] + v
                else:
                    d[e] = v
        out = Poly(a.ring)
        out.terms = {e: _norm(v) for e, v in d.items() if not (v == 0)}
        return out

    __rmul__ = __mul__

    def __truediv__(self, other):
        if is_scalar(other):
            if other == 0:
                raise DivisionByZero("division by zero")
            if isinstance(other, int):
                other = Fraction(other)
            return self.scale(1 / other)
        if isinstance(other, Poly) and other.is_const():
            return self / other.const_value()
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Poly.const(1, self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if is_scalar(other):
            other = Poly.const(other, self.ring)
        if not isinstance(other, Poly):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        t = self.trim()
        return hash((t.ring, frozenset((e, _hashable(c)) for e, c in t.terms.items())))

    # structure -----------------------------------------------------------------
    def degree(self, var: str | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        if var not in self.ring:
            return 0
        i = self.ring.index(var)
        return max(e[i] for e in self.terms)

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    def top_part(self) -> "Poly":
        return self.homogeneous_part(self.degree()) if self.terms else Poly(self.ring)

    def coeff(self, mono: Mapping[str, int]):
        e = tuple(mono.get(n, 0) for n in self.ring)
        extra = set(mono) - set(self.ring)
        if any(mono[n] for n in extra):
            return 0
        return self.terms.get(e, 0)

    def univariate_coeffs(self, var: str) -> List["Poly"]:
        """Coefficients (as polys without ``var``) indexed by degree in ``var``."""
        if var not in self.ring:
            return [self] if self.terms else []
        i = self.ring.index(var)
        rest = self.ring[:i] + self.ring[i + 1:]
        n = self.degree(var)
        buckets: List[Dict] = [dict() for _ in range(n + 1)]
        for e, c in self.terms.items():
            buckets[e[i]][e[:i] + e[i + 1:]] = c
        return [Poly(rest, b) for b in buckets]

    def scalar_coeffs(self, var: str) -> list:
        """Coefficient list of a univariate polynomial in ``var``."""
        others = [v for v in self.variables() if v != var]
        if others:
            raise NotUnivariate(f"polynomial involves {others}")
        if not self.terms:
            return []
        if var not in self.ring:
            return [self.const_value()]
        i = self.ring.index(var)
        n = self.degree(var)
        out = [0] * (n + 1)
        for e, c in self.terms.items():
            out[e[i]] = c
        return out

    def diff(self, var: str) -> "Poly":
        if var not in self.ring:
            return Poly(self.ring)
        i = self.ring.index(var)
        d = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                d[ne] = _norm(c * e[i])
        return Poly(self.ring, d)

    def substitute(self, assignment: Mapping[str, object]) -> "Poly":
        """Simultaneous substitution of polynomials (or scalars) for variables."""
        for n in assignment:
            if n not in self.ring:
                raise RingMismatch(f"variable {n} not in ring {self.ring}")
        images = {n: Poly.coerce(v) for n, v in assignment.items()}
        keep = [n for n in self.ring if n not in images]
        ring = merge_rings(keep, *[p.ring for p in images.values()])
        images = {n: p.to_ring(ring) for n, p in images.items()}
        for n in keep:
            images[n] = Poly.var(n, ring)
        powers: Dict[Tuple[str, int], Poly] = {}

        def pw(n, k):
            key = (n, k)
            if key not in powers:
                powers[key] = images[n] ** k
            return powers[key]

        out = Poly(ring)
        for e, c in self.terms.items():
            term = Poly.const(c, ring)
            for n, k in zip(self.ring, e):
                if k:
                    term = term * pw(n, k)
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate at a point; all variables in use must be assigned."""
        total = 0
        for e, c in self.terms.items():
            v = c
            for n, k in zip(self.ring, e):
                if k:
                    if n not in values:
                        raise PolyError(f"no value for {n}")
                    v = v * values[n] ** k
            total = total + v
        return _norm(total)

    def partial_evaluate(self, values: Mapping[str, object]) -> "Poly":
        vals = {n: v for n, v in values.items() if n in self.ring}
        return self.substitute(vals).trim() if vals else self

    # division ---------------------------------------------------------------
    def leading(self):
        e = max(self.terms)
        return e, self.terms[e]

    def exact_div(self, other: "Poly") -> "Poly":
        """Exact quotient self/other; raises NotDivisible otherwise."""
        if not isinstance(other, Poly):
            other = Poly.coerce(other)
        if other.is_zero():
            raise DivisionByZero("division by zero polynomial")
        a, b = self._align(other)
        if b.is_const():
            return a / b.const_value()
        be, bc = b.leading()
        inv = 1 / (Fraction(bc) if isinstance(bc, int) else bc)
        rem = dict(a.terms)
        q: Dict[Tuple[int, ...], object] = {}
        bterms = list(b.terms.items())
        while rem:
            re_ = max(rem)
            rc = rem[re_]
            de = tuple(i - j for i, j in zip(re_, be))
            if any(k < 0 for k in de):
                raise NotDivisible("not divisible")
            f = _norm(rc * inv)
            q[de] = f
            for e2, c2 in bterms:
                e = tuple(i + j for i, j in zip(de, e2))
                v = rem.get(e, 0) - f * c2
                if v == 0:
                    rem.pop(e, None)
                else:
                    rem[e] = _norm(v)
        return Poly(a.ring, q)

    def divides(self, other: "Poly") -> bool:
        try:
            other.exact_div(self)
            return True
        except NotDivisible:
            return False

    # display -----------------------------------------------------------------------
    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), [-k for k in e])):
            c = self.terms[e]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(self.ring, e) if k)
            cs = fmt_scalar(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                if _needs_paren(cs):
                    cs = f"({cs})"
                parts.append(f"{cs}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


def _needs_paren(s: str) -> bool:
    body = s[1:] if s.startswith("-") else s
    return any(ch in body for ch in "+-") or "i" in body or "sqrt" in body or "theta" in body


def _hashable(c):
    if isinstance(c, TowerElem):
        return hash(c)
    return c


def fmt_scalar(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


def var(name: str) -> Poly:
    return Poly.var(name)


def vars_(*names: str) -> List[Poly]:
    ring = merge_rings(names)
    return [Poly.var(n, ring) for n in names]


# ---------------------------------------------------------------------------
# univariate kernels on coefficient lists (index = degree)


def _inv(c):
    if isinstance(c, int):
        return Fraction(1, c)
    return 1 / c


def u_trim(a: list) -> list:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def u_deriv(a: list) -> list:
    return u_trim([_norm(a[k] * k) for k in range(1, len(a))])


def u_add(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return u_trim([_norm((a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0)) for k in range(n)])


def u_sub(a: list, b: list) -> list:
    return u_add(a, [-c for c in b])


def u_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return u_trim([_norm(c) for c in out])


def u_scale(a: list, c) -> list:
    return u_trim([_norm(x * c) for x in a])


def u_divmod(a: list, b: list):
    b = u_trim(b)
    if not b:
        raise DivisionByZero("division by zero polynomial")
    a = u_trim(a)
    if len(a) < len(b):
        return [], a
    inv = _inv(b[-1])
    q = [0] * (len(a) - len(b) + 1)
    r = list(a)
    for k in range(len(a) - len(b), -1, -1):
        c = _norm(r[k + len(b) - 1] * inv)
        q[k] = c
        if c == 0:
            continue
        for j, y in enumerate(b):
            r[k + j] = _norm(r[k + j] - c * y)
    return u_trim(q), u_trim(r[: len(b) - 1])


def u_monic(a: list) -> list:
    a = u_trim(a)
    if not a:
        return a
    inv = _inv(a[-1])
    return [_norm(c * inv) for c in a[:-1]] + [1]


def u_gcd(a: list, b: list) -> list:
    a, b = u_trim(a), u_trim(b)
    while b:
        _, r = u_divmod(a, b)
        a, b = b, r
    return u_monic(a)


def u_eval(a: list, x):
    v = 0
    for c in reversed(a):
        v = v * x + c
    return _norm(v)


def u_squarefree_decomposition(a: list) -> List[Tuple[int, list]]:
    """Yun's algorithm: list of (multiplicity, monic squarefree factor)."""
    a = u_monic(a)
    if len(a) <= 1:
        return []
    out = []
    d = u_deriv(a)
    g = u_gcd(a, d)
    b, _ = u_divmod(a, g)
    c, _ = u_divmod(d, g)
    c = u_sub(c, u_deriv(b))
    k = 1
    while len(b) > 1:
        h = u_gcd(b, c)
        if len(h) > 1:
            out.append((k, h))
        b, _ = u_divmod(b, h)
        c, _ = u_divmod(c, h)
        c = u_sub(c, u_deriv(b))
        k += 1
    return out


def u_squarefree_part(a: list) -> list:
    a = u_trim(a)
    if len(a) <= 1:
        return u_monic(a)
    g = u_gcd(a, u_deriv(a))
    q, _ = u_divmod(a, g)
    return u_monic(q)


def u_remove_common(a: list, b: list) -> list:
    """Strip from ``a`` every root it shares with ``b`` (all multiplicities)."""
    a = u_trim(a)
    if not u_trim(b):
        return a
    while True:
        g = u_gcd(a, b)
        if len(g) <= 1:
            return a
        a, _ = u_divmod(a, g)


# ---------------------------------------------------------------------------
# public univariate operations on Poly


def _univ(f: Poly, var: str) -> list:
    return f.scalar_coeffs(var)


def gcd_univar(f: Poly, g: Poly, var: str) -> Poly:
    return Poly.from_univariate(u_gcd(_univ(f, var), _univ(g, var)), var)


def squarefree_decomposition(f: Poly, var: str) -> List[Tuple[int, Poly]]:
    c = _univ(f, var)
    if not u_trim(c):
        raise PolyError("zero polynomial")
    return [(m, Poly.from_univariate(h, var)) for m, h in u_squarefree_decomposition(c)]


def squarefree_profile(f: Poly, var: str) -> List[Tuple[int, int]]:
    return [(m, len(h) - 1) for m, h in u_squarefree_decomposition(_univ(f, var))
            if len(h) > 1]


def squarefree_part(f: Poly, var: str) -> Poly:
    return Poly.from_univariate(u_squarefree_part(_univ(f, var)), var)


def roots_in_tower(f: Poly, var: str, session=None) -> List[Tuple[object, int]]:
    """Roots with multiplicity of a univariate polynomial of degree <= 2.

    Higher degrees are accepted when every squarefree factor has degree <= 2.
    Square roots are taken through ``session`` (a field.Session) when given.
    """
    from . import field as fld

    out = []
    for m, h in u_squarefree_decomposition(_univ(f, var)):
        deg = len(h) - 1
        if deg == 1:
            out.append((_norm(-h[0]), m))
        elif deg == 2:
            c, b = h[0], h[1]
            disc = _norm(b * b - 4 * c)
            if session is not None:
                r = session.sqrt(disc) if disc != 0 else 0
            else:
                r, _ = fld.sqrt(disc) if disc != 0 else (0, None)
            half = Fraction(1, 2)
            out.append((_norm((-b + r) * half), m))
            out.append((_norm((-b - r) * half), m))
        elif deg > 2:
            raise DegreeUnsupported(f"squarefree factor of degree {deg}")
    return out


# ---------------------------------------------------------------------------
# resultants


def sylvester_matrix(a: list, b: list) -> list:
    """Sylvester matrix of coefficient lists (index = degree); rows of ``a`` first."""
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    ra = list(reversed(a))
    rb = list(reversed(b))
    for i in range(n):
        rows.append([0] * i + ra + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + rb + [0] * (size - n - 1 - i))
    return rows


def bareiss_det(mat: list):
    """Fraction-free determinant (entries from an exact integral domain)."""
    n = len(mat)
    if n == 0:
        return 1
    M = [list(r) for r in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if not (M[r][k] == 0):
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                M[i][j] = _exact_quot(num, prev)
        prev = M[k][k]
    return _norm(M[n - 1][n - 1]) if sign == 1 else _norm(-M[n - 1][n - 1])


def _exact_quot(a, b):
    if isinstance(a, Poly):
        if isinstance(b, Poly):
            return a.exact_div(b)
        return a / b if b != 1 else a
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r == 0:
            return q
        return Fraction(a, b)
    return _norm(a / b) if b != 1 else a


def resultant_univariate(a: list, b: list):
    a, b = u_trim(a), u_trim(b)
    if not a or not b:
        return 0
    if len(a) == 1 and len(b) == 1:
        return 1
    return bareiss_det(sylvester_matrix(a, b))


def resultant(f: Poly, g: Poly, var: str) -> Poly:
    """Res_var(f, g): Sylvester determinant, f rows on top.

    Parametric resultants are computed by evaluation at integer points and
    exact interpolation, which reproduces the determinant exactly.
    """
    f, g = f._align(g)
    if var not in f.ring:
        raise PolyError(f"{var} not in ring")
    fc = f.univariate_coeffs(var)
    gc = g.univariate_coeffs(var)
    if not fc or not gc:
        return Poly(tuple(n for n in f.ring if n != var))
    rest = fc[0].ring
    params = [n for n in rest if any(p.degree(n) > 0 for p in fc + gc)]
    mat = sylvester_matrix(fc, gc)
    if not params:
        sc = [[(e.const_value() if isinstance(e, Poly) else e) for e in row] for row in mat]
        return Poly.const(bareiss_det(sc), ())
    return _det_interpolate(mat, params)


def _poly_row_degree(row, v):
    return max((e.degree(v) if isinstance(e, Poly) else 0) for e in row)


def _det_interpolate(mat, params: List[str]) -> Poly:
    v = params[0]
    bound = sum(max(_poly_row_degree(row, v), 0) for row in mat)
    pts = list(range(bound + 1))
    vals = []
    for x0 in pts:
        sub = [[_spec(e, v, x0) for e in row] for row in mat]
        if len(params) == 1:
            vals.append(Poly.const(bareiss_det(sub), ()))
        else:
            vals.append(_det_interpolate(sub, params[1:]))
    return _interpolate(pts, vals, v)


def _spec(e, v, x0):
    if not isinstance(e, Poly):
        return e
    if v not in e.ring:
        return e.const_value() if e.is_const() else e
    r = e.substitute({v: x0})
    return r.const_value() if r.is_const() and not r.variables() else r.trim()


def _interpolate(xs: list, ys: List[Poly], v: str) -> Poly:
    """Newton interpolation with polynomial values."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    X = Poly.var(v)
    result = coef[-1] if isinstance(coef[-1], Poly) else Poly.const(coef[-1], ())
    for i in range(n - 2, -1, -1):
        result = result * (X - xs[i]) + coef[i]
    return result


def discriminant_univ(a: list):
    return resultant_univariate(a, u_deriv(a))
