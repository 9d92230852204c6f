import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from quadmaps.census import (Hc, Hc2, Hn, census_discrete, census_family1,
                             census_family8, census_generic, census_of, components_for,
                             family4_structure, minors, ParamOutOfDomain, _param_vanishes,
                             verify_class_structure)
from quadmaps.checks import expected_class
from quadmaps.classes import AffineClass, EXCEPTIONAL_AB, H0, representative
from quadmaps.field import Session, TowerElem
from quadmaps.maps import random_conjugate
from quadmaps.reduce import reduce_map

t = sympy.Symbol("t")
I = TowerElem.gauss(0, 1)


def _sym_c(c):
    if isinstance(c, (int, Fraction)):
        c = Fraction(c)
        return sympy.Rational(c.numerator, c.denominator)
    return sympy.nsimplify(str(c).replace("i", "I"))


def sym_t(coeffs):
    return sum(_sym_c(c) * t ** k for k, c in enumerate(coeffs))


def qq_poly(coeffs):
    return sympy.Poly([_sym_c(c) for c in reversed(coeffs)], t, domain="QQ")


@pytest.mark.parametrize("A,B,counts", [
    (1, 1, (6, 0, 4)),
    (Fraction(1, 16), Fraction(-1, 16), (4, 1, 3)),
    (1, 4, (2, 2, 2)),
])
def test_family1_examples(A, B, counts):
    assert census_family1(A, B).counts() == counts


def test_hc_at_one_one_matches_closed_form():
    want = sympy.expand(t ** 3 * (t + 1) ** 3 + t ** 3 - (t + 1) ** 3)
    assert sympy.expand(sym_t(Hc(1, 1))) == want


def test_family8_examples():
    c = census_family8(0)
    assert c.counts() == (4, 0, 2)
    assert sympy.expand(sym_t(c.cusp_poly) * 3) == 3 * t ** 4 - 1
    assert sym_t(c.node_poly) == t ** 4 + 1
    A = Session().sqrt(4 * I)
    assert census_family8(A).counts() == (2, 1, 1)
    assert census_family8(1).counts() == (4, 0, 2)


@pytest.mark.parametrize("k,counts", [(16, (3, 0, 0)), (22, (2, 0, 1))])
def test_discrete_examples(k, counts):
    assert census_discrete(k).counts() == counts


def test_item27_single_cusp():
    assert census_discrete(27).cusps == 1


@pytest.mark.parametrize("A,cusps,inter", [(Fraction(1, 4), 3, 3), (1, 2, 2), (-1, 3, 3)])
def test_family4_structure(A, cusps, inter):
    c = family4_structure(A)
    assert (c.cusps, c.intersections) == (cusps, inter)


def test_family4_domain():
    with pytest.raises(ParamOutOfDomain):
        family4_structure(0)
    with pytest.raises(ParamOutOfDomain):
        census_family1(0, 1)


def test_item23_double_cusp_root():
    # 6t^2 + 3t + 3/8 = 6 (t + 1/4)^2
    assert sympy.expand(sym_t(Hc2(0, Fraction(3, 16))) - 6 * (t + sympy.Rational(1, 4)) ** 2) == 0


def test_item22_cusp_parameters():
    assert sympy.roots(sym_t(Hc2(0, 0)), t) == {0: 1, sympy.Rational(-1, 2): 1}


# ---------------------------------------------------------------------------
# H0 and the gcd of the cusp and node polynomials

def _gcd_nontrivial(A, B) -> bool:
    return sympy.degree(sympy.gcd(sym_t(Hc(A, B)), sym_t(Hn(A, B))), t) > 0


ON_CURVE = list(EXCEPTIONAL_AB) + [(Fraction(1, 16), Fraction(-1, 16))]


@pytest.mark.parametrize("A,B", ON_CURVE)
def test_gcd_nontrivial_on_h0(A, B):
    assert H0(A, B) == 0
    assert _gcd_nontrivial(A, B)


def test_gcd_vs_h0_off_curve_samples():
    rng = random.Random(11)
    seen = 0
    while seen < 24:
        A = Fraction(rng.randint(-9, 9), rng.randint(1, 6))
        B = Fraction(rng.randint(-9, 9), rng.randint(1, 6))
        if A == 0 or B == 0:
            continue
        seen += 1
        assert _gcd_nontrivial(A, B) == (H0(A, B) == 0)


def test_h0_values():
    assert H0(Fraction(1, 16), Fraction(-1, 16)) == 0
    assert H0(1, 1) == 153


# ---------------------------------------------------------------------------
# bookkeeping and evenness

params = st.fractions(min_value=-6, max_value=6, max_denominator=9)


@settings(max_examples=1000, deadline=None)
@given(params, params)
def test_family1_bookkeeping_and_evenness(A, B):
    assume(A != 0 and B != 0)
    c = census_family1(A, B)
    assert c.cusps + 2 * c.double_cusps == 6
    hn, hc = qq_poly(Hn(A, B)), qq_poly(Hc(A, B))
    # drop every root shared with the cusp polynomial, then count distinct roots
    g = hn.gcd(hc)
    while g.degree() > 0:
        hn = hn.quo(g)
        g = hn.gcd(hc)
    distinct = hn.quo(hn.gcd(hn.diff(t))).degree()
    assert distinct % 2 == 0
    assert 2 * c.nodes == distinct


gauss_params = st.builds(lambda a, b: TowerElem.gauss(a, b) if b else a,
                         st.fractions(min_value=-4, max_value=4, max_denominator=5),
                         st.fractions(min_value=-4, max_value=4, max_denominator=5))


@settings(max_examples=1000, deadline=None)
@given(gauss_params)
def test_family8_bookkeeping_and_evenness(A):
    c = census_family8(A)
    assert c.cusps + 2 * c.double_cusps == 4
    # 2 nodes unless A^4 = -16
    a4 = A ** 4
    assert c.counts() == ((2, 1, 1) if a4 == -16 else (4, 0, 2))


@settings(max_examples=30, deadline=None)
@given(params, params)
def test_family1_engine_matches_closed_form(A, B):
    assume(A != 0 and B != 0)
    assume(not any((A, B) == (Fraction(a), Fraction(b)) for a, b in EXCEPTIONAL_AB))
    cls = AffineClass.family(1 if H0(A, B) else 2, A, B)
    gen = census_generic(cls)
    assert gen.counts() == census_of(cls).counts()


# ---------------------------------------------------------------------------
# parametrizations and structure

DISCRETE_WITH_CURVES = [k for k in range(1, 65)
                        if components_for(expected_class(k)) and k not in (1, 2, 4, 8)]


@pytest.mark.parametrize("k", DISCRETE_WITH_CURVES)
def test_parametrizations_annihilate_minors(k):
    F = representative(k)
    for comp in components_for(expected_class(k)):
        if comp.param is None:
            continue
        for m in minors(F):
            assert _param_vanishes(m, comp), comp.name


@pytest.mark.parametrize("k", range(1, 65))
def test_structure(k):
    rep = verify_class_structure(expected_class(k), seed=k)
    assert rep.ok, rep.failures()


def test_item7_three_lines_all_2_to_1():
    comps = census_discrete(7).components
    assert len(comps) == 3
    assert {c["restriction"] for c in comps} == {"2:1"}


def test_item18_hyperbola():
    c = census_discrete(18)
    assert len(c.components) == 1 and c.components[0]["kind"] == "hyperbola"


def test_item64_not_applicable():
    c = census_discrete(64)
    assert not c.applicable
    assert c.critical_set == "everything"


@pytest.mark.parametrize("k", [1, 3, 5, 9, 13, 16, 22, 27, 37])
def test_census_invariant_under_conjugation(k):
    base = census_of(expected_class(k))
    rng = random.Random(k)
    for _ in range(3):
        H = random_conjugate(representative(k), rng)[0]
        assert census_of(reduce_map(H).cls).signature() == base.signature()
