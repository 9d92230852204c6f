import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quadmaps.checks import expected_class
from quadmaps.classes import (AffineClass, EXCEPTIONAL_AB, H0, family1_form, family8_form,
                              representative)
from quadmaps.field import FieldPolicy, TowerElem
from quadmaps.maps import mp, random_conjugate, verify_witness
from quadmaps.reduce import reduce_map
from quadmaps.topo import topo_index

I = TowerElem.gauss(0, 1)


def check_reduction(F, want: AffineClass):
    r = reduce_map(F)
    assert r.cls is not None and r.cls.same_class(want), f"{r.cls} != {want}"
    assert not r.certificate_only
    assert verify_witness(F, r.canonical, r.steps)
    return r


@pytest.mark.parametrize("k", range(1, 65))
def test_idempotence(k):
    r = check_reduction(representative(k), expected_class(k))
    assert r.cls.params == expected_class(k).params


@pytest.mark.parametrize("f,g,want", [
    ("x^2+z^2+y", "y^2+z^2+x+z", AffineClass.family(1, 1, 1)),
    ("x^2+z^2+y", "y^2+z^2+4*x+i*z", AffineClass.family(2, Fraction(1, 16), Fraction(-1, 16))),
    ("x^2+z^2+y", "y^2+z^2+3*x", AffineClass.family(4, Fraction(1, 9))),
    # with no y term the linear part moves to z, then x after an i-swap, so
    # beta = alpha lands at A = -1 and F_5 needs beta = i*alpha
    ("x^2+z^2", "y^2+z^2+x+z", AffineClass.family(4, -1)),
    ("x^2+z^2", "y^2+z^2+x+i*z", AffineClass.discrete(5)),
    ("x^2+z^2", "y^2+z^2+2*x+2*i*z", AffineClass.discrete(5)),
    ("x^2+z^2+2*y", "y*z+x", AffineClass.family(8, 0)),
    ("x^2+z^2+2*y", "y*z+x+sqrt(2)*(1+i)*y", AffineClass.discrete(9)),
    ("x^2+z^2", "y*z+x+y", AffineClass.discrete(11)),
    ("x^2+2*y*z", "y^2+2*x*y+2*z", AffineClass.discrete(22)),
    ("x^2+2*y*z", "y^2+2*x*y+2*x+2*y+2*z", AffineClass.discrete(22)),
    ("x^2+2*y*z", "y^2+2*x*y+2*y", AffineClass.discrete(25)),
    ("x*y+z", "z^2+x", AffineClass.discrete(18)),
    ("x*y", "y^2+2*y", AffineClass.discrete(44)),
    ("0", "0", AffineClass.discrete(64)),
    ("x", "y", AffineClass.discrete(62)),
])
def test_examples(f, g, want):
    check_reduction(mp(f, g), want)


def test_family1_example_params_exact():
    r = reduce_map(mp("x^2+z^2+y", "y^2+z^2+x+z"))
    assert r.cls.params == (1, 1)
    assert H0(1, 1) == 153


def test_classify_x_y_topo():
    r = reduce_map(mp("x", "y"))
    assert str(topo_index(r.cls)) == "31g"


@pytest.mark.parametrize("A,B", EXCEPTIONAL_AB)
def test_exceptional_triple_goes_to_discrete3(A, B):
    check_reduction(family1_form(Fraction(A), Fraction(B)), AffineClass.discrete(3))


nonzero = st.fractions(min_value=-5, max_value=5, max_denominator=8).filter(lambda v: v != 0)


@settings(max_examples=60, deadline=None)
@given(nonzero, nonzero)
def test_nothing_else_goes_to_discrete3(A, B):
    r = reduce_map(family1_form(A, B))
    exceptional = any((A, B) == (Fraction(a), Fraction(b)) for a, b in EXCEPTIONAL_AB)
    assert (r.cls == AffineClass.discrete(3)) == exceptional
    assert verify_witness(family1_form(A, B), r.canonical, r.steps)
    if not exceptional:
        assert r.cls.number == (2 if H0(A, B) == 0 else 1)


@pytest.mark.parametrize("A", [1, 2, TowerElem.gauss(1, 1), Fraction(1, 3)])
def test_family8_symmetry(A):
    a = reduce_map(family8_form(A)).cls
    b = reduce_map(family8_form(I * A)).cls
    assert a.number == b.number == 8
    assert a.params[0] ** 4 == b.params[0] ** 4


@pytest.mark.parametrize("k", range(1, 65))
def test_affine_invariance(k):
    F = representative(k)
    want = reduce_map(F).cls
    rng = random.Random(1000 + k)
    for _ in range(3):
        H = random_conjugate(F, rng)[0]
        check_reduction(H, want)


def test_no_cubic_policy_gives_certificate_only():
    # this type-16 variant needs a cube root for its witness
    H = mp("x^2+y^2+2*z", "z^2+2*x+3*y")
    full = reduce_map(H)
    assert full.cls == AffineClass.discrete(16)
    assert verify_witness(H, full.canonical, full.steps)
    r = reduce_map(H, FieldPolicy(allow_cubic=False))
    assert r.certificate_only
    assert r.cls == AffineClass.discrete(16)
    assert r.steps == [] and r.canonical is None
