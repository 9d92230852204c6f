from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from quadmaps.field import Session
from quadmaps.parse import parse_poly
from quadmaps.poly import (NotDivisible, Poly, gcd_univar, resultant, resultant_univariate,
                           roots_in_tower, squarefree_profile, u_gcd)

N = settings(max_examples=1000, deadline=None)
XYZ = ("x", "y", "z")
coef = st.integers(-4, 4)


@st.composite
def poly3(draw, deg=2):
    """Random polynomial in x, y, z of total degree <= deg."""
    terms = {}
    for a in range(deg + 1):
        for b in range(deg + 1 - a):
            for c in range(deg + 1 - a - b):
                v = draw(coef)
                if v:
                    terms[(a, b, c)] = v
    return Poly(XYZ, terms)


@st.composite
def upoly(draw, max_deg=5):
    cs = draw(st.lists(coef, min_size=1, max_size=max_deg + 1))
    return Poly.from_univariate(cs, "t")


def _sym(p: Poly):
    return sympy.sympify(str(p).replace("^", "**"))


@N
@given(poly3(), poly3(), poly3(1), poly3(1), poly3(1))
def test_substitution_homomorphism(f, g, a, b, c):
    sub = {"x": a, "y": b, "z": c}
    assert (f + g).substitute(sub) == f.substitute(sub) + g.substitute(sub)
    assert (f * g).substitute(sub) == f.substitute(sub) * g.substitute(sub)


@N
@given(upoly(), upoly())
def test_resultant_vanishes_iff_common_factor(f, g):
    if f.is_zero() or g.is_zero() or f.degree() < 1 or g.degree() < 1:
        return
    r = resultant(f, g, "t")
    common = gcd_univar(f, g, "t").degree("t") > 0
    assert (r.is_zero() if r.terms else True) == common


@settings(max_examples=200, deadline=None)
@given(upoly(4), upoly(4))
def test_resultant_matches_sympy(f, g):
    if f.degree() < 1 or g.degree() < 1:
        return
    t = sympy.Symbol("t")
    ours = resultant(f, g, "t")
    val = ours.const_value() if ours.terms else 0
    # sympy.resultant can disagree in sign with the Sylvester determinant
    # (e.g. t+1, t^3); the determinant is the definition we follow
    from sympy.polys.subresultants_qq_zz import sylvester
    ours_q = sympy.Rational(str(val))
    assert ours_q == sylvester(_sym(f), _sym(g), t, 1).det()
    assert abs(ours_q) == abs(sympy.resultant(_sym(f), _sym(g), t))


def test_resultant_sign_small_case():
    f = parse_poly("t+1", ("t",))
    g = parse_poly("t^3", ("t",))
    # lc(f)^3 * g(-1) = -1
    assert resultant(f, g, "t").const_value() == -1


@settings(max_examples=300, deadline=None)
@given(upoly(6))
def test_squarefree_profile_matches_sympy(f):
    if f.degree() < 1:
        return
    t = sympy.Symbol("t")
    _, facs = sympy.sqf_list(_sym(f), t)
    want = {}
    for fac, m in facs:
        d = sympy.degree(fac, t)
        if d > 0:
            want[m] = want.get(m, 0) + d
    got = {}
    for m, d in squarefree_profile(f, "t"):
        got[m] = got.get(m, 0) + d
    assert got == want


@N
@given(poly3(), poly3())
def test_exact_division(f, g):
    if g.is_zero():
        return
    assert (f * g).exact_div(g) == f


def test_exact_division_rejects():
    with pytest.raises(NotDivisible):
        parse_poly("x^2+1").exact_div(parse_poly("x+2"))


def test_parametric_resultant():
    ring = ("a", "t")
    a, t = Poly.var("a", ring), Poly.var("t", ring)
    r = resultant(t * t - a, t - 1, "t")
    assert r == (Poly.const(1, ring) - a).to_ring(r.ring)


@N
@given(poly3())
def test_print_parse_roundtrip(f):
    assert parse_poly(str(f)).to_ring(XYZ) == f


@pytest.mark.parametrize("text,expected", [
    ("t^2-2", 2), ("(t-1)^2*(t+3)", 2), ("t^2+1", 2), ("4*t^2+4*t+1", 1)])
def test_roots_in_tower(text, expected):
    f = parse_poly(text, ("t",))
    roots = roots_in_tower(f, "t", Session())
    assert len(roots) == expected
    for r, _ in roots:
        assert f.substitute({"t": Poly.const(r, ())}).is_zero() or \
            f.evaluate({"t": r}) == 0


def test_bareiss_sign_convention():
    # Res(t - a, t - b) = b - a under Sylvester rows of the first argument on top
    assert resultant_univariate([-2, 1], [-5, 1]) == -5 + 2
