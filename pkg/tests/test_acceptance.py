"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line in ``RESULTS``; the conftest hook prints
them at the end of the pytest run.  Running this file directly executes every
criterion and prints the same lines.
"""
import random
import sys
import time
from fractions import Fraction

import sympy

from quadmaps.census import Hc, Hn, census_family1, minors
from quadmaps.checks import (suite_census, suite_exceptional, suite_identities,
                             suite_idempotence, suite_merges, suite_resultants)
from quadmaps.field import Session, TowerElem
from quadmaps.fuzz import default_targets, fuzz
from quadmaps.maps import (ConjugationBox, QuadMap, random_source, random_target,
                           verify_witness)
from quadmaps.pencil import TOP_FORMS, canonical_top, classify_and_witness, normalize_pair
from quadmaps.poly import Poly, resultant_univariate, u_gcd

RESULTS = {}
XYZ = ("x", "y", "z")


def record(n, ok, detail):
    RESULTS[n] = (bool(ok), detail)
    assert ok, detail


def _failed(checks):
    return [f"{c.name}: {c.detail}" for c in checks if not c.ok]


# ---------------------------------------------------------------------------

def test_criterion_1_resultant_identities():
    t0 = time.perf_counter()
    checks = suite_resultants()
    dt = time.perf_counter() - t0
    bad = _failed(checks)
    signs = ", ".join(c.detail for c in checks)
    record(1, not bad and len(checks) == 3 and dt < 60,
           f"3 identities ({signs}) in {dt:.1f}s" + (f"; failed {bad}" if bad else ""))


def test_criterion_2_idempotence():
    t0 = time.perf_counter()
    checks = suite_idempotence()
    dt = time.perf_counter() - t0
    bad = _failed(checks)
    record(2, not bad and len(checks) == 64 and dt < 120,
           f"{64 - len(bad)}/64 representatives with verified witnesses in {dt:.1f}s"
           + (f"; failed {bad}" if bad else ""))


def test_criterion_3_census_matrix():
    checks = suite_census()
    bad = _failed(checks)
    record(3, not bad, f"{len(checks) - len(bad)}/{len(checks)} census entries exact; "
           "item 22 cusp parameters {0, -1/2} (printed -1/6 is an erratum)"
           + (f"; failed {bad}" if bad else ""))


def test_criterion_4_exceptional_locus():
    from quadmaps import identities as idn

    checks = suite_exceptional()
    bad = _failed(checks)
    printed_first = idn.exceptional_printed_holds()
    corrected = idn.EXC_1.holds() and idn.EXC_2.holds()
    # the criterion asks for both equivalences exactly as printed
    ok = not bad and printed_first and idn.EXC_2.holds()
    record(4, ok, f"H0 values and Discrete(3) routing {len(checks) - len(bad)}/{len(checks)}; "
           f"first equivalence as printed (+3): {'holds' if printed_first else 'FAILS'}; "
           f"with +1 both equivalences {'hold' if corrected else 'fail'}")


def test_criterion_5_identities():
    from quadmaps import identities as idn

    corrected = [c for c in suite_identities() if not c.erratum]
    bad = _failed(corrected)
    printed_bad = [i.name for i in idn.ALL if i.printed is not None and not i.holds(i.printed)]
    ok = not bad and not printed_bad
    record(5, ok, f"corrected identities {len(corrected) - len(bad)}/{len(corrected)} hold; "
           f"printed forms failing: {printed_bad or 'none'}")


def test_criterion_6_top_types():
    t0 = time.perf_counter()
    box = ConjugationBox(radius=3, gaussian=True, translations=False)
    cases, bad = 0, []
    for k in sorted(TOP_FORMS):
        rng = random.Random(6000 + k)
        F = canonical_top(k)
        for trial in range(51):
            H = F if trial == 0 else F.conjugate(random_source(rng, box, True),
                                                 random_target(rng, box, True))
            got, _, steps = Session().run(lambda s: classify_and_witness(H, s))
            G = H.apply_chain(steps)
            ok = got == k and verify_witness(H, G, steps) and \
                normalize_pair(G)[0].top() == canonical_top(k)
            cases += 1
            if not ok:
                bad.append((k, trial, got))
    dt = time.perf_counter() - t0
    record(6, not bad and cases >= 1050 and dt < 600,
           f"{cases - len(bad)}/{cases} top-type cases in {dt:.1f}s"
           + (f"; failed {bad[:5]}" if bad else ""))


def test_criterion_7_fuzz():
    out = fuzz(7, 100, default_targets())
    record(7, out["failures"] == 0 and out["trials"] == 100 * len(default_targets()),
           f"{out['trials']} conjugations over {len(out['per_target'])} targets, "
           f"{out['failures']} failures in {out['elapsed_s']:.0f}s"
           + (f"; first {out['failing'][:3]}" if out["failures"] else ""))


def test_criterion_8_merge_witnesses():
    checks = suite_merges()
    corrected = [c for c in checks if not c.erratum]
    bad = _failed(corrected)
    printed = [c for c in checks if c.erratum]
    printed_bad = [c.name for c in printed if not c.ok]
    record(8, not bad and not printed_bad,
           f"chains {len(corrected) - len(bad)}/{len(corrected)} verify (h solved); "
           f"printed forms failing: {printed_bad or 'none'}")


# ---------------------------------------------------------------------------
# criterion 9: property suites, explicit loops of N cases each

N = 1000
_S = Session()
_R2 = _S.sqrt(2)
_R3I = _S.sqrt(TowerElem.gauss(3, 1))


def _gauss(rng):
    def q():
        return Fraction(rng.randint(-7, 7), rng.randint(1, 6))
    return TowerElem.gauss(q(), q())


def _tower(rng):
    a, b, c, d = (_gauss(rng) for _ in range(4))
    return a + b * _R2 + (c + d * _R2) * _R3I


def _field_axioms(rng):
    a, b, c = _tower(rng), _tower(rng), _tower(rng)
    ok = (a + b) + c == a + (b + c) and (a * b) * c == a * (b * c)
    ok = ok and a * (b + c) == a * b + a * c and a * b == b * a and a - a == 0
    if a != 0:
        ok = ok and a * a.inverse() == 1 and (b / a) * a == b
    return ok


def _upoly(rng, deg):
    return [_gauss(rng) if rng.random() < 0.8 else 0 for _ in range(deg)] + [_gauss(rng)]


def _mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _resultant_gcd(rng):
    a, b = _upoly(rng, rng.randint(1, 4)), _upoly(rng, rng.randint(1, 4))
    if rng.random() < 0.5:
        c = _upoly(rng, rng.randint(1, 2))
        a, b = _mul(a, c), _mul(b, c)
    shared = len(u_gcd(a, b)) > 1
    return (resultant_univariate(a, b) == 0) == shared


def _rand_poly(rng, deg=2):
    p = Poly.const(0, XYZ)
    for _ in range(rng.randint(1, 5)):
        e = [0, 0, 0]
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(3)] += 1
        term = Poly.const(_gauss(rng), XYZ)
        for v, k in zip(XYZ, e):
            term = term * Poly.var(v, XYZ) ** k
        p = p + term
    return p


def _substitution(rng):
    p, q = _rand_poly(rng), _rand_poly(rng)
    sub = {v: _rand_poly(rng, 1) for v in XYZ}
    point = {v: _gauss(rng) for v in XYZ}
    ok = (p * q).substitute(sub) == p.substitute(sub) * q.substitute(sub)
    ok = ok and (p + q).substitute(sub) == p.substitute(sub) + q.substitute(sub)
    inner = {v: sub[v].evaluate(point) for v in XYZ}
    return ok and p.substitute(sub).evaluate(point) == p.evaluate(inner)


PAIRS = ((0, 1), (0, 2), (1, 2))


def _det2(M, r, c):
    return M[r[0]][c[0]] * M[r[1]][c[1]] - M[r[0]][c[1]] * M[r[1]][c[0]]


def _minor_covariance(rng):
    def c():
        return _gauss(rng) if rng.random() < 0.3 else rng.randint(-3, 3)
    F = QuadMap([c() for _ in range(10)], [c() for _ in range(10)])
    phi, psi = random_source(rng), random_target(rng)
    G = F.conjugate(phi, psi)
    sub = dict(zip(XYZ, phi.exprs()))
    mF = [m.substitute(sub).to_ring(XYZ) for m in minors(F)]
    dN = psi.N[0][0] * psi.N[1][1] - psi.N[0][1] * psi.N[1][0]
    mG = minors(G)
    for j, cols in enumerate(PAIRS):
        want = Poly.const(0, XYZ)
        for a, rows in enumerate(PAIRS):
            want = want + mF[a] * _det2(phi.L, rows, cols)
        if mG[j] != want * dN:
            return False
    return True


_t = sympy.Symbol("t")


def _qq(coeffs):
    return sympy.Poly([sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
                       for c in reversed(coeffs)], _t, domain="QQ")


def _census_evenness(rng):
    while True:
        A = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
        B = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
        if A and B:
            break
    c = census_family1(A, B)
    hn, hc = _qq(Hn(A, B)), _qq(Hc(A, B))
    g = hn.gcd(hc)
    while g.degree() > 0:
        hn = hn.quo(g)
        g = hn.gcd(hc)
    distinct = hn.quo(hn.gcd(hn.diff(_t))).degree()
    return c.cusps + 2 * c.double_cusps == 6 and distinct % 2 == 0 and 2 * c.nodes == distinct


PROPERTIES = {
    "field axioms": _field_axioms,
    "resultant-gcd consistency": _resultant_gcd,
    "substitution homomorphism": _substitution,
    "minor covariance": _minor_covariance,
    "census evenness": _census_evenness,
}


def test_criterion_9_property_suites():
    parts, all_ok = [], True
    for i, (name, prop) in enumerate(PROPERTIES.items()):
        rng = random.Random(9000 + i)
        fails = sum(1 for _ in range(N) if not prop(rng))
        all_ok = all_ok and fails == 0
        parts.append(f"{name} {N - fails}/{N}")
    record(9, all_ok, "; ".join(parts))


# ---------------------------------------------------------------------------

def summary_lines():
    return [f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
            for n, (ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    for fn in tests:
        try:
            fn()
        except AssertionError:
            pass
        n = int(fn.__name__.split("_")[2])
        ok, detail = RESULTS[n]
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
