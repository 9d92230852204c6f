"""Reduction of a quadratic map to its canonical affine representative.

After the linear witness from :mod:`pencil` has put the leading part into
canonical shape, a per-type recipe removes the lower-order terms.  Every
recipe re-reads the current coefficients from the tracker, so each step is
checked by composition rather than by trusting closed formulas.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from .classes import (AffineClass, H0, family1_form, family4_form, family8_form,
                      is_exceptional)
from .field import (DEFAULT_POLICY, I, CubicNotAllowed, FieldError, FieldPolicy, Session,
                    TowerElem)
from .maps import QuadMap, Step
from .pencil import PencilProfile, WitnessUnavailable, classify_and_witness, classify_top, normalize_pair
from .poly import _norm
from .tracker import P, Q, Tracker, X, Y, Z

PERMS = ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))


class ReductionError(RuntimeError):
    """A recipe did not land on the expected canonical form (a bug)."""


class ClassWithoutWitness(FieldError):
    """The class is decided but the witness needs a forbidden extension."""

    def __init__(self, cls: AffineClass, msg: str):
        super().__init__(msg)
        self.cls = cls


def _q(v):
    """Scalars as Fraction/TowerElem so that '/' stays exact."""
    return Fraction(v) if isinstance(v, int) else v


class _Ctx:
    def __init__(self, tr: Tracker, s: Session):
        self.tr = tr
        self.s = s

    def a(self, k):
        return _q(self.tr.a(k))

    def b(self, k):
        return _q(self.tr.b(k))


def _check(tr: Tracker, G: QuadMap, what: str):
    if tr.F != G:
        raise ReductionError(f"{what}: expected {G}, got {tr.F}")


# ---------------------------------------------------------------------------
# type 1: (x^2 + z^2, y^2 + z^2)

def _r_t1(c: _Ctx) -> AffineClass:
    tr = c.tr
    tr.src(X - c.a(7) / 2, Y - c.b(8) / 2, Z - c.a(9) / 2, "translate")
    tr.kill_constants()
    a8 = c.a(8)
    if a8 != 0:
        tr.both((a8 * X, a8 * Y, a8 * Z), (P / a8 ** 2, Q / a8 ** 2), "scale")
        return _t1_unit(c)
    al, be = c.b(7), c.b(9)
    if al != 0:
        tr.both((al * Y, al * X, al * Z - be / 2),
                (Q / al ** 2 + be ** 2 / (4 * al ** 2), P / al ** 2 - be ** 2 / (4 * al ** 2)),
                "move linear term into f")
        return _t1_unit(c)
    if be != 0:
        tr.both((be * Z, I * be * X, -be * Y), ((P - Q) / be ** 2, P / be ** 2),
                "move linear term into f")
        return _t1_unit(c)
    return AffineClass.discrete(7)


def _t1_unit(c: _Ctx) -> AffineClass:
    """(x^2 + z^2 + y, y^2 + z^2 + al x + be z)."""
    tr = c.tr
    al, be = c.b(7), c.b(9)
    if al != 0 and be != 0:
        tr.both((al * X / 2, Y / 2, be * Z / 2), (4 * P / al ** 2, 4 * Q / al ** 2), "scale")
        A, B = _norm(1 / al ** 2), _norm(be ** 2 / al ** 2)
        _check(tr, family1_form(A, B), "type 1 family")
        if is_exceptional(A, B):
            return _t1_exceptional(c, A, B)
        if H0(A, B) == 0:
            return AffineClass.family(2, A, B)
        return AffineClass.family(1, A, B)
    if al == 0 and be != 0:
        tr.both((I * Z, -Y + Fraction(1, 2), I * X), (-P + Fraction(1, 2), Q - P + Fraction(1, 4)),
                "rotate z into x")
        al = c.b(7)
    if al != 0:
        tr.both((al * X / 2, Y / 2, al * Z / 2), (4 * P / al ** 2, 4 * Q / al ** 2), "scale")
        A = _norm(1 / al ** 2)
        _check(tr, family4_form(A), "type 1 one-parameter family")
        if A == 1:
            return AffineClass.discrete(5)
        return AffineClass.family(4, A)
    tr.both((X / 2, Y / 2, Z / 2), (4 * P, 4 * Q), "scale")
    return AffineClass.discrete(6)


def _t1_exceptional(c: _Ctx, A, B) -> AffineClass:
    tr = c.tr
    if (A, B) == (-4, -1):
        tr.both((Y, X, -Z - 1), (-Q / 4 + Fraction(1, 4), -P / 4 - Fraction(1, 4)), "exceptional")
        A, B = Fraction(-1, 4), Fraction(1, 4)
        _check(tr, family1_form(A, B), "exceptional step")
    if (A, B) == (Fraction(-1, 4), Fraction(1, 4)):
        tr.both((-Z, -Y + 1, -X), (4 * P + 2, 4 * P - 4 * Q + 1), "exceptional")
        _check(tr, family1_form(1, 4), "exceptional step")
    tr.both((2 * X, 2 * Y, Z), (P / 4, Q / 4), "scale")
    return AffineClass.discrete(3)


# ---------------------------------------------------------------------------
# type 2: (x^2 + z^2, yz)

A0_SQ = 4 * I  # A0 = sqrt(2)(1+i)


def _r_t2(c: _Ctx) -> AffineClass:
    tr, s = c.tr, c.s
    tr.src(X - c.a(7) / 2, Y - c.b(9), Z - c.a(9) / 2, "translate")
    tr.kill_constants()
    a8, b7, b8 = c.a(8), c.b(7), c.b(8)
    if a8 != 0 and b7 != 0:
        a = s.sqrt(a8 * b7 / 2)
        b = 2 * a ** 2 / a8
        tr.both((a * X, b * Y, a * Z), (P / a ** 2, a8 / (2 * a ** 3) * Q), "scale")
        A = c.b(8)
        _check(tr, family8_form(A), "type 2 family")
        if A ** 4 == -16:
            return _t2_special(c, A)
        return AffineClass.family(8, A)
    if b7 == 0:
        if a8 != 0 and b8 != 0:
            tr.both((b8 * X, 2 * b8 ** 2 / a8 * Y, b8 * Z),
                    (P / b8 ** 2, a8 / (2 * b8 ** 3) * Q), "scale")
            return AffineClass.discrete(10)
        if a8 != 0:
            tr.both((X, 2 / a8 * Y, Z), (P, a8 / 2 * Q), "scale")
            return AffineClass.discrete(13)
        if b8 != 0:
            tr.both((b8 * X, Y, b8 * Z), (P / b8 ** 2, Q / b8), "scale")
            return AffineClass.discrete(12)
        return AffineClass.discrete(15)
    if b8 != 0:
        tr.both((b8 * X, b7 * Y, b8 * Z), (P / b8 ** 2, Q / (b7 * b8)), "scale")
        return AffineClass.discrete(11)
    tr.both((X, b7 * Y, Z), (P, Q / b7), "scale")
    return AffineClass.discrete(14)


def _t2_special(c: _Ctx, A) -> AffineClass:
    tr, s = c.tr, c.s
    A0 = s.sqrt(A0_SQ)
    tr.both((A * X, Y, A * Z), (P / A ** 2, Q / A), "to yz + A^-2 x + y form")
    if A ** 2 != A0_SQ:
        tr.both((-X, -Y, Z), (P, -Q), "sign")
    tr.both((X / A0, Y, Z / A0), (A0 ** 2 * P, A0 * Q), "scale")
    return AffineClass.discrete(9)


# ---------------------------------------------------------------------------
# type 3: (x^2 + y^2, z^2)

def _r_t3(c: _Ctx) -> AffineClass:
    tr, s = c.tr, c.s
    tr.src(X - c.a(7) / 2, Y - c.a(8) / 2, Z - c.b(9) / 2, "translate")
    tr.kill_constants()
    a9, b7, b8 = c.a(9), c.b(7), c.b(8)
    if b7 == 0 and b8 == 0:
        if a9 != 0:
            cc = 2 / a9
            tr.both((X, Y, cc * Z), (P, Q / cc ** 2), "scale")
            return AffineClass.discrete(20)
        return AffineClass.discrete(21)
    tr.src((X + Y) / 2, (X - Y) / (2 * I), Z, "isotropic coordinates")
    c7, c8 = c.b(7), c.b(8)
    if c7 != 0 and c8 != 0:
        if a9 != 0:
            try:
                cr = s.cbrt(a9 * c7 * c8 / 2)
            except CubicNotAllowed as exc:
                raise ClassWithoutWitness(AffineClass.discrete(16), str(exc)) from exc
            tr.both((cr ** 2 / c7 * X, cr ** 2 / c8 * Y, cr * Z),
                    (c7 * c8 / cr ** 4 * P, Q / cr ** 2), "scale")
            tr.src(X + I * Y, X - I * Y, Z, "back to real form")
            return AffineClass.discrete(16)
        tr.both((X / c7, Y / c8, Z), (c7 * c8 * P, Q), "scale")
        tr.src(X + I * Y, X - I * Y, Z, "back to real form")
        return AffineClass.discrete(17)
    if c7 == 0:
        tr.src(Y, X, Z, "swap")
        c7 = c.b(7)
    if a9 != 0:
        tr.both((2 / c7 * X, a9 * c7 / 2 * Y, Z), (P / a9, Q), "scale")
        return AffineClass.discrete(18)
    tr.both((2 / c7 * X, c7 / 2 * Y, Z), (P, Q), "scale")
    return AffineClass.discrete(19)


# ---------------------------------------------------------------------------
# type 4: (x^2 + 2yz, y^2 + 2xy)

def _r_t4(c: _Ctx) -> AffineClass:
    tr, s = c.tr, c.s
    tr.src(X - c.a(7) / 2, Y - c.a(9) / 2, Z - c.a(8) / 2, "translate")
    tr.kill_constants()
    h7, h8, h9 = c.b(7) / 2, c.b(8) / 2, c.b(9) / 2
    if h9 != 0:
        tr.both((h9 * X, h9 * Y, h9 * Z), (P / h9 ** 2, Q / h9 ** 2), "scale")
        A, B = c.b(7) / 2, c.b(8) / 2
        disc = 4 * A ** 2 + 12 * A - 16 * B + 3
        if disc != 0:
            T = s.sqrt(disc / 3)
            S = (-2 * A - 1 + T) / 4
            R1 = T ** 2 * X + (T ** 2 - T) / 2 * Y + S ** 2 + A * S
            R2 = T * Y + S
            R3 = (-(S + A) * T ** 2 * X - T * (2 * A * T - T + 1) / 8 * Y + T ** 3 * Z
                  + S * (2 * A - T ** 2 + T) / 8)
            tr.both((R1, R2, R3), ((P - S * Q) / T ** 4, Q / T ** 3), "normalize")
            tr.kill_constants()
            return AffineClass.discrete(22)
        R3 = -(A / 4) * (2 * X + Y) + Z - (4 * A ** 2 + 3 * A) / 32
        tr.both((X - A ** 2 / 4, Y - A / 2, R3), (P + A / 2 * Q, Q), "normalize")
        tr.kill_constants()
        return AffineClass.discrete(23)
    if h7 != 0:
        b7, b8 = h7, h8
        tr.both((b7 * X - b8, b7 * Y, -(b8 / 2) * (2 * X + Y) + b7 * Z),
                (P / b7 ** 2 + b8 / b7 ** 3 * Q + b8 ** 2 / b7 ** 2, Q / b7 ** 2 + 2 * b8 / b7),
                "normalize")
        tr.kill_constants()
        return AffineClass.discrete(24)
    if h8 != 0:
        tr.both((h8 * X, h8 * Y, h8 * Z), (P / h8 ** 2, Q / h8 ** 2), "scale")
        return AffineClass.discrete(25)
    return AffineClass.discrete(26)


# ---------------------------------------------------------------------------
# type 5: (x^2 + 2yz, z^2)

def _r_t5(c: _Ctx) -> AffineClass:
    tr = c.tr
    tr.src(X - c.a(7) / 2, Y - c.a(9) / 2, Z - c.a(8) / 2, "translate")
    tr.kill_constants()
    h7, h8, h9 = c.b(7) / 2, c.b(8) / 2, c.b(9) / 2
    if h8 != 0:
        tr.both((h8 * X, h8 * Y, h8 * Z), (P / h8 ** 2, Q / h8 ** 2), "scale")
        b7, b9 = c.b(7) / 2, c.b(9) / 2
        T = (b7 ** 2 + 2 * b9) / 3
        tr.both((X + b7 * Z - b7 * T, -b7 * X + Y - (2 * T - b9) * Z + T * (T - b9), Z - T),
                (P + T * Q + 2 * T ** 3, Q + 3 * T ** 2), "normalize")
        tr.kill_constants()
        return AffineClass.discrete(27)
    if h7 != 0:
        b7, b9 = h7, h9
        tr.both((b7 * X - b9 * Z, b9 * X + b7 * Y - b9 ** 2 / (2 * b7) * Z, b7 * Z),
                (P / b7 ** 2, Q / b7 ** 2), "normalize")
        tr.kill_constants()
        return AffineClass.discrete(28)
    if h9 != 0:
        tr.both((h9 * X, h9 * Y, h9 * Z), (P / h9 ** 2, Q / h9 ** 2), "scale")
        return AffineClass.discrete(29)
    return AffineClass.discrete(30)


# ---------------------------------------------------------------------------
# type 6: (x^2, y^2)

def _r_t6(c: _Ctx) -> AffineClass:
    tr, s = c.tr, c.s
    a9, b9 = c.a(9), c.b(9)
    if a9 != 0 and b9 != 0:
        tr.src(X, Y, -(c.b(7) / b9) * X - (c.a(8) / a9) * Y + Z, "shear")
        tr.src(X - c.a(7) / 2, Y - c.b(8) / 2, Z, "translate")
        tr.kill_constants()
        a9, b9 = c.a(9), c.b(9)
        bb = s.sqrt(b9 / a9)
        tr.both((X, bb * Y, 2 / a9 * Z), (P, a9 / b9 * Q), "scale")
        return AffineClass.discrete(31)
    if a9 != 0 or b9 != 0:
        if a9 == 0:
            tr.both((Y, X, Z), (Q, P), "swap")
        a9 = c.a(9)
        tr.src(X, Y - c.b(8) / 2, (-c.a(7) * X - c.a(8) * Y + 2 * Z) / a9, "absorb into z")
        tr.kill_constants()
        b7 = c.b(7)
        if b7 != 0:
            tr.both((X / b7, Y, Z / (2 * b7 ** 2)), (b7 ** 2 * P, Q), "scale")
            return AffineClass.discrete(32)
        tr.src(X, Y, Z / 2, "scale")
        return AffineClass.discrete(33)
    tr.src(X - c.a(7) / 2, Y - c.b(8) / 2, Z, "translate")
    tr.kill_constants()
    a8, b7 = c.a(8), c.b(7)
    if a8 != 0 and b7 != 0:
        try:
            a = s.cbrt(b7 * a8 ** 2 / 8)
        except CubicNotAllowed as exc:
            raise ClassWithoutWitness(AffineClass.discrete(34), str(exc)) from exc
        b = 2 * a ** 2 / a8
        tr.both((a * X, b * Y, Z), (P / a ** 2, Q / b ** 2), "scale")
        return AffineClass.discrete(34)
    if a8 != 0 or b7 != 0:
        if a8 == 0:
            tr.both((Y, X, Z), (Q, P), "swap")
        a8 = c.a(8)
        tr.both((X, 2 / a8 * Y, Z), (P, a8 ** 2 / 4 * Q), "scale")
        return AffineClass.discrete(35)
    return AffineClass.discrete(36)


# ---------------------------------------------------------------------------
# type 7: (xy, yz)

def _r_t7(c: _Ctx) -> AffineClass:
    tr, s = c.tr, c.s
    tr.src(X - c.a(8), Y - c.a(7), Z - c.b(8), "translate")
    tr.kill_constants()
    a9, b7, b9 = c.a(9), c.b(7), c.b(9)
    if a9 != 0 and b7 != 0:
        bb = s.sqrt(a9 * b7)
        tr.both((bb / b7 * X, bb * Y, Z), (P / a9, Q / bb), "scale")
        b9 = c.b(9)
        T = s.sqrt(b9 ** 2 + 4)
        if T != 0:
            S1, S2 = (-b9 + T) / 2, (-b9 - T) / 2
            tr.both(((-X + Z) / T ** 2, T * Y + S1, (S1 * X - S2 * Z) / T ** 2),
                    (S2 * P + Q, S1 * P + Q), "diagonalize")
            tr.kill_constants()
            return AffineClass.discrete(37)
        if b9 == -2 * I:
            tr.both((-X, -Y, Z), (P, -Q), "sign")
        tr.both((X, Y - I, I * X + Z), (P, -I * P + Q), "normalize")
        tr.kill_constants()
        return AffineClass.discrete(38)
    if b7 != 0:
        if b9 == 0:
            tr.both((Z / b7, Y, X + Z), (-b7 * P + Q, b7 * P), "normalize")
            return AffineClass.discrete(38)
        tr.both((X / b9, b9 * Y, (-b7 * X + Z) / b9 ** 2), (P, b7 * P + b9 * Q), "normalize")
        return AffineClass.discrete(37)
    if a9 != 0:
        if b9 == 0:
            tr.both((a9 * X, Y, Z), (P / a9, Q), "scale")
            return AffineClass.discrete(38)
        tr.both(((-a9 * X + Z) / b9 ** 2, -b9 * Y, -X / b9), (Q, -b9 * P + a9 * Q), "normalize")
        tr.src(X, Y + 1, Z, "translate")
        tr.kill_constants()
        return AffineClass.discrete(37)
    if b9 != 0:
        tr.both((X, b9 * Y, Z), (P / b9, Q / b9), "scale")
        return AffineClass.discrete(37)
    return AffineClass.discrete(39)


# ---------------------------------------------------------------------------
# type 8: (xy, y^2)

def _r_t8(c: _Ctx) -> AffineClass:
    tr = c.tr
    b9 = c.b(9)
    if b9 != 0:
        tr.src(X, Y, (Z - c.b(7) * X - c.b(8) * Y - c.b(10)) / b9, "absorb into z")
        a9 = c.a(9)
        tr.tgt(P - a9 * Q, Q, "clear z from f")
        tr.src(X + a9 * Y, Y, Z, "shear")
        tr.src(X - c.a(8), Y - c.a(7), Z, "translate")
        tr.src(X, Y, Z - c.b(8) * Y, "absorb into z")
        tr.kill_constants()
        tr.src(X, Y, 2 * Z, "scale")
        return AffineClass.discrete(40)
    if c.a(9) != 0:
        tr.src(X, Y - c.b(8) / 2, Z, "translate")
        tr.src(X, Y, (Z - c.a(7) * X - c.a(8) * Y) / c.a(9), "absorb into z")
        tr.kill_constants()
        b7 = c.b(7)
        if b7 != 0:
            tr.both((X / b7, Y, Z / b7), (b7 * P, Q), "scale")
            return AffineClass.discrete(41)
        return AffineClass.discrete(42)
    tr.src(X - c.a(8), Y - c.a(7), Z, "translate")
    tr.kill_constants()
    b7, b8 = c.b(7), c.b(8)
    if b7 != 0:
        be = -b8 / (3 * b7)
        de = be * b7
        ga = be * de + b7 * be ** 2 + b8 * be
        tr.src(X + be * Y + ga, Y + de, Z, "shift")
        tr.tgt(P - be * Q, Q, "clear y^2 from f")
        tr.kill_constants()
        tr.both((2 / b7 * X, Y, Z), (b7 / 2 * P, Q), "scale")
        return AffineClass.discrete(43)
    if b8 != 0:
        lam = b8 / 2
        tr.both((X / lam, lam * Y, Z), (P, Q / lam ** 2), "scale")
        return AffineClass.discrete(44)
    return AffineClass.discrete(45)


# ---------------------------------------------------------------------------
# leading parts of lower rank

def _r_t9(c: _Ctx) -> AffineClass:
    c.tr.src(X - c.a(7) / 2, Y - c.a(9), Z - c.a(8), "translate")
    c.tr.kill_constants()
    return AffineClass.discrete(46)


def _r_t10(c: _Ctx) -> AffineClass:
    c.tr.src(X - c.a(7) / 2, Y - c.a(9), Z - c.a(8), "translate")
    c.tr.kill_constants()
    return AffineClass.discrete(47)


def _r_t11(c: _Ctx) -> AffineClass:
    c.tr.src(X - c.a(7) / 2, Y - c.a(8) / 2, Z - c.a(9) / 2, "translate")
    c.tr.kill_constants()
    return AffineClass.discrete(48)


def _r_t12(c: _Ctx) -> AffineClass:
    tr = c.tr
    tr.src(X - c.a(7) / 2, Y - c.a(8) / 2, Z, "translate")
    tr.tgt(P - c.a(9) * Q, Q, "clear z from f")
    tr.kill_constants()
    return AffineClass.discrete(49)


def _r_t13(c: _Ctx) -> AffineClass:
    tr = c.tr
    tr.src(X - c.a(7) / 2, Y - c.a(8) / 2, Z, "translate")
    tr.kill_constants()
    if c.a(9) != 0:
        tr.src(X, Y, Z / c.a(9), "scale")
        return AffineClass.discrete(50)
    return AffineClass.discrete(51)


def _r_t14(c: _Ctx) -> AffineClass:
    tr = c.tr
    tr.tgt(P - c.a(7) * Q, Q, "clear x from f")
    tr.src(X - c.a(8), Y, Z, "translate")
    tr.kill_constants()
    if c.a(9) != 0:
        tr.src(X, Y, Z / c.a(9), "scale")
        return AffineClass.discrete(52)
    return AffineClass.discrete(53)


def _r_t15(c: _Ctx) -> AffineClass:
    tr = c.tr
    tr.src(X - c.a(7) / 2, Y - c.a(8) / 2, Z, "translate")
    tr.kill_constants()
    if c.a(9) != 0:
        tr.src(X, Y, Z / c.a(9), "scale")
        return AffineClass.discrete(54)
    return AffineClass.discrete(55)


def _r_t16(c: _Ctx) -> AffineClass:
    tr = c.tr
    tr.src(X - c.a(7) / 2, Y, Z, "translate")
    tr.tgt(P - c.a(8) * Q, Q, "clear y from f")
    tr.kill_constants()
    if c.a(9) != 0:
        tr.src(X, Y, Z / c.a(9), "scale")
        return AffineClass.discrete(56)
    return AffineClass.discrete(57)


def _x2_plus_linear(c: _Ctx, with_y: int, without: int) -> AffineClass:
    """f = x^2 + a8 y + a9 z, g free of y and z."""
    tr = c.tr
    a8, a9 = c.a(8), c.a(9)
    if a8 != 0:
        tr.src(X, (Y - a9 * Z) / a8, Z, "absorb into y")
        return AffineClass.discrete(with_y)
    if a9 != 0:
        tr.src(X, Z, Y / a9, "absorb into y")
        return AffineClass.discrete(with_y)
    return AffineClass.discrete(without)


def _r_t17(c: _Ctx) -> AffineClass:
    c.tr.tgt(P - c.a(7) * Q, Q, "clear x from f")
    c.tr.kill_constants()
    return _x2_plus_linear(c, 58, 59)


def _r_t18(c: _Ctx) -> AffineClass:
    c.tr.src(X - c.a(7) / 2, Y, Z, "translate")
    c.tr.kill_constants()
    return _x2_plus_linear(c, 60, 61)


def _r_const(k):
    def r(c: _Ctx) -> AffineClass:
        c.tr.kill_constants()
        return AffineClass.discrete(k)
    return r


_REDUCERS = {1: _r_t1, 2: _r_t2, 3: _r_t3, 4: _r_t4, 5: _r_t5, 6: _r_t6, 7: _r_t7, 8: _r_t8,
             9: _r_t9, 10: _r_t10, 11: _r_t11, 12: _r_t12, 13: _r_t13, 14: _r_t14, 15: _r_t15,
             16: _r_t16, 17: _r_t17, 18: _r_t18, 19: _r_const(62), 20: _r_const(63),
             21: _r_const(64)}


# ---------------------------------------------------------------------------
# driver

@dataclass
class Reduction:
    """Outcome of reducing one map.

    ``steps`` transform the input into ``canonical`` (psi o F o phi, left to
    right).  When ``certificate_only`` is set the class is known but no
    witness could be produced under the field policy.
    """

    cls: AffineClass
    top_type: int
    profile: PencilProfile
    steps: List[Step] = field(default_factory=list)
    canonical: Optional[QuadMap] = None
    certificate_only: bool = False
    note: str = ""
    tower: str = "Q(i)"


def reduce_once(F: QuadMap, session: Session, perm=(0, 1, 2)) -> Reduction:
    k, prof, steps = classify_and_witness(F, session, perm)
    tr = Tracker(F)
    tr.extend(steps)
    cls = _REDUCERS[k](_Ctx(tr, session))
    G = cls.canonical_form()
    if tr.F != G:
        raise ReductionError(f"type {k} recipe ended at {tr.F}, expected {G} ({cls})")
    return Reduction(cls, k, prof, tr.steps, G)


def _family_orbit(F: QuadMap, session: Session, first: AffineClass) -> AffineClass:
    params = [first.params]
    for perm in PERMS[1:]:
        r = reduce_once(F, session, perm)
        if r.cls.kind == "family" and r.cls.number == first.number:
            params.append(r.cls.params)
    return AffineClass.family(first.number, *first.params, orbit=params)


def reduce_map(F: QuadMap, policy: FieldPolicy = DEFAULT_POLICY,
               source: Optional[Callable[[Session], QuadMap]] = None,
               orbit: bool = True) -> Reduction:
    """Classify F up to affine equivalence and build an exact witness chain.

    ``source`` rebuilds the input inside the session (needed when the input
    itself has irrational coefficients and a replay must change the tower).
    """
    session = Session(policy)

    def run(s: Session):
        G = source(s) if source is not None else F
        for v in G.f + G.g:
            if isinstance(v, TowerElem):
                s.absorb(v)
        r = reduce_once(G, s)
        if orbit and r.cls.kind == "family" and r.cls.number in (1, 2, 4):
            r.cls = _family_orbit(G, s, r.cls)
        r.tower = s.ctx.describe()
        return r

    try:
        return session.run(run)
    except (ClassWithoutWitness, WitnessUnavailable) as exc:
        G = source(Session(policy)) if source is not None else F
        G0, _ = normalize_pair(G)
        k, prof = classify_top(G0)
        cls = getattr(exc, "cls", None)
        if cls is None:
            cls = certificate_class(G, k)
        return Reduction(cls, k, prof, [], None, True, str(exc))


def certificate_class(F: QuadMap, k: int) -> Optional[AffineClass]:
    """Class from invariants alone, used when no witness is available.

    Only the leading-part type is certified in this situation; the lower
    order invariants are not computed without a witness.
    """
    return None


def classify(F: QuadMap, policy: FieldPolicy = DEFAULT_POLICY) -> AffineClass:
    return reduce_map(F, policy).cls
