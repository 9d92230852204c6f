import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quadmaps.census import minors
from quadmaps.field import TowerElem
from quadmaps.maps import (DegreeTooHigh, QuadMap, SingularTransformation, SourceAut, Step,
                           TargetAut, ConjugationBox, mp, random_source, random_target,
                           verify_witness)
from quadmaps.parse import parse_poly
from quadmaps.poly import Poly

XYZ = ("x", "y", "z")
I = TowerElem.gauss(0, 1)
seeds = st.integers(min_value=0, max_value=10 ** 9)


def rand_map(rng, full=True):
    def c():
        v = rng.randint(-3, 3)
        return TowerElem.gauss(v, rng.randint(-2, 2)) if rng.random() < 0.3 else v
    f = [c() if full or rng.random() < 0.5 else 0 for _ in range(10)]
    g = [c() if full or rng.random() < 0.5 else 0 for _ in range(10)]
    return QuadMap(f, g)


def det2(M, r, c):
    return M[r[0]][c[0]] * M[r[1]][c[1]] - M[r[0]][c[1]] * M[r[1]][c[0]]


PAIRS = ((0, 1), (0, 2), (1, 2))


@settings(max_examples=1000, deadline=None)
@given(seeds)
def test_conjugate_is_group_action(seed):
    rng = random.Random(seed)
    F = rand_map(rng)
    p1, p2 = random_source(rng), random_source(rng)
    q1, q2 = random_target(rng), random_target(rng)
    lhs = F.conjugate(p1, q1).conjugate(p2, q2)
    rhs = F.conjugate(p1.compose(p2), q2.compose(q1))
    assert lhs == rhs


@settings(max_examples=1000, deadline=None)
@given(seeds)
def test_minor_covariance(seed):
    # J_G = N J_F(phi) L, so minors(G) = det N * minors(F)(phi) * compound(L)
    rng = random.Random(seed)
    F = rand_map(rng, full=False)
    phi, psi = random_source(rng), random_target(rng)
    G = F.conjugate(phi, psi)
    mF = minors(F)
    sub = dict(zip(XYZ, phi.exprs()))
    mF_phi = [m.substitute(sub).to_ring(XYZ) for m in mF]
    dN = psi.N[0][0] * psi.N[1][1] - psi.N[0][1] * psi.N[1][0]
    for j, cols in enumerate(PAIRS):
        want = Poly.const(0, XYZ)
        for a, rows in enumerate(PAIRS):
            want = want + mF_phi[a] * det2(phi.L, rows, cols)
        assert minors(G)[j] == want * dN


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_top_part_commutes_with_linear_conjugation(seed):
    rng = random.Random(seed)
    F = rand_map(rng)
    if F.degree(0) != 2 or F.degree(1) != 2:
        return
    phi = random_source(rng, linear_only=True)
    psi = random_target(rng, linear_only=True)
    G = F.conjugate(phi, psi)
    if G.degree(0) != 2 or G.degree(1) != 2:
        return
    assert G.top() == F.top().conjugate(phi, psi)


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_random_conjugate_witness_sound(seed):
    rng = random.Random(seed)
    F = rand_map(rng)
    phi, psi = random_source(rng), random_target(rng)
    G = F.conjugate(phi, psi)
    assert verify_witness(F, G, [Step(phi, psi)])
    bad = TargetAut(psi.N, [psi.s[0] + 1, psi.s[1]])
    assert not verify_witness(F, G, [Step(phi, bad)])


def test_minors_examples():
    m = minors(mp("x^2+z^2", "y^2+z^2"))
    assert m == (parse_poly("4*x*y"), parse_poly("4*x*z"), parse_poly("-4*y*z"))
    m = minors(mp("x", "y"))
    assert [str(v) for v in m] == ["1", "0", "0"]


@pytest.mark.parametrize("tv", [2, 3, -5, 7, Fraction(1, 3)])
def test_minors_vanish_on_item8_curve(tv):
    # phi(t) = (1/t, t^2, t)
    F = mp("x^2+z^2+2*y", "y*z+x")
    pt = {"x": Poly.const(1 / Fraction(tv), XYZ), "y": Poly.const(Fraction(tv) ** 2, XYZ),
          "z": Poly.const(Fraction(tv), XYZ)}
    for m in minors(F):
        assert m.substitute(pt).is_zero()


def test_exceptional_family_conjugation_example():
    F = mp("x^2+1/4*z^2-1/2*y", "-1/4*y^2+1/4*z^2+2*x+1/2*z")
    phi = SourceAut.from_exprs([parse_poly("-z"), parse_poly("-y+1"), parse_poly("-x")])
    psi = TargetAut.from_exprs([parse_poly("4*p+2", ("p", "q")),
                                parse_poly("4*p-4*q+1", ("p", "q"))])
    G = mp("x^2+4*z^2+2*y", "y^2+4*z^2+2*x+8*z")
    assert F.conjugate(phi, psi) == G
    assert verify_witness(F, G, [Step(phi, psi)])
    psi3 = TargetAut.from_exprs([parse_poly("4*p+2", ("p", "q")),
                                 parse_poly("4*p-4*q+3", ("p", "q"))])
    assert F.conjugate(phi, psi3) != G


def test_identity_automorphisms():
    F = mp("x*y+z", "y^2+x")
    assert F.conjugate(SourceAut.identity(), TargetAut.identity()) == F
    assert verify_witness(F, F, [])


@pytest.mark.parametrize("f,g,top", [
    ("x^2+z^2+y", "y^2+z^2+x+z", ("x^2+z^2", "y^2+z^2")),
    ("x*y+z", "y^2+x", ("x*y", "y^2")),
    ("x", "0", ("x", "0")),
])
def test_top_part(f, g, top):
    assert mp(f, g).top() == mp(*top)


def test_rejections():
    with pytest.raises(DegreeTooHigh):
        mp("x^3", "y")
    with pytest.raises(SingularTransformation):
        SourceAut([[1, 0, 0], [1, 0, 0], [0, 0, 1]])
    with pytest.raises(SingularTransformation):
        TargetAut([[1, I], [I, -1]])


def test_box_translations_off():
    rng = random.Random(3)
    phi = random_source(rng, ConjugationBox(translations=False))
    assert all(v == 0 for v in phi.t)
