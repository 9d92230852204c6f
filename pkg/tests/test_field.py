from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from quadmaps.field import (CubicNotAllowed, DivisionByZero, FieldPolicy, I,
                            IncompatibleTowers, Session, TowerElem, sqrt)

from conftest import R2, R3I, gauss, tower

N = settings(max_examples=1000, deadline=None)


@N
@given(tower(), tower(), tower())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == 0


@N
@given(tower())
def test_inverse(a):
    if a.is_zero():
        with pytest.raises(DivisionByZero):
            a.inverse()
    else:
        assert a * a.inverse() == 1


@N
@given(gauss())
def test_sqrt_squares_back(a):
    s = Session()
    r = s.sqrt(a)
    assert r * r == a


def test_generators():
    assert R2 * R2 == 2
    assert R3I * R3I == TowerElem.gauss(3, 1)
    assert I * I == -1


def test_rational_sqrt_stays_in_base():
    r, ctx = sqrt(Fraction(9, 4))
    assert r in (Fraction(3, 2), Fraction(-3, 2)) and ctx.depth == 0


def test_descend_after_cancellation():
    x = (R2 + 1) - R2
    assert x == 1 and x.descended().ctx.depth == 0


def test_cube_root_policy():
    s = Session(FieldPolicy(allow_cubic=False))
    with pytest.raises(CubicNotAllowed):
        s.run(lambda ss: ss.cbrt(3))
    t = Session()
    c = t.run(lambda ss: ss.cbrt(3))
    assert c ** 3 == 3


def test_perfect_cube_needs_no_extension():
    s = Session(FieldPolicy(allow_cubic=False))
    c = s.run(lambda ss: ss.cbrt(Fraction(-27, 8)))
    assert c ** 3 == Fraction(-27, 8)


@pytest.mark.parametrize("v", [2, -1, TowerElem.gauss(0, 2), Fraction(1, 3)])
def test_numeric_embedding(v):
    r = Session().sqrt(v)
    with mpmath.workdps(40):
        z = r.to_complex(dps=40)
        assert abs(z * z - TowerElem.coerce(v).to_complex(dps=40)) < mpmath.mpf(10) ** -35


def test_equal_elements_from_different_towers():
    # sqrt(3+i) adjoined over Q(i)(sqrt 2) and directly over Q(i)
    s1, s2 = Session(), Session()
    s1.sqrt(2)
    a = s1.sqrt(TowerElem.gauss(3, 1)) * TowerElem.gauss(0, 1)
    b = s2.sqrt(TowerElem.gauss(3, 1)) * TowerElem.gauss(0, 1)
    assert a == b and b == a and hash(a) == hash(b)
    assert (a - b).is_zero()
    assert a * b == TowerElem.gauss(-3, -1)
    assert b + s1.sqrt(2) - a == s1.sqrt(2)


def test_unrelated_generators_stay_incompatible():
    a, b = Session().sqrt(2), Session().sqrt(3)
    assert a != b
    with pytest.raises(IncompatibleTowers):
        a + b
