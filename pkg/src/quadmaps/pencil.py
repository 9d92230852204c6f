"""Classification of the leading part of a quadratic map into 21 top types.

For two independent quadratic leading forms the decision uses the pencil
determinant ``det(lam*Mf + mu*Mg)``: multiplicities of its roots and ranks of
the members at those roots.  When the determinant vanishes identically the
members share a kernel vector or a linear factor.  Lower-degree pairs are
decided by the rank of ``f`` and the position of the linear form ``g``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import List, Optional, Sequence, Tuple

from . import linalg as la
from .field import (CubicNotAllowed, FieldError, Session, TowerElem,
                    gaussian_rational_roots)
from .maps import QuadMap, Step
from .parse import parse_map
from .poly import (_norm, u_divmod, u_gcd, u_deriv, u_monic, u_squarefree_decomposition,
                   u_trim)
from .tracker import P, Q, Tracker, X, Y, Z

TOP_FORMS = {
    1: ("x^2+z^2", "y^2+z^2"),
    2: ("x^2+z^2", "y*z"),
    3: ("x^2+y^2", "z^2"),
    4: ("x^2+2*y*z", "y^2+2*x*y"),
    5: ("x^2+2*y*z", "z^2"),
    6: ("x^2", "y^2"),
    7: ("x*y", "y*z"),
    8: ("x*y", "y^2"),
    9: ("x^2+y*z", "x"),
    10: ("x^2+y*z", "y"),
    11: ("x^2+y^2+z^2", "0"),
    12: ("x^2+y^2", "z"),
    13: ("x^2+y^2", "x"),
    14: ("x*y", "x"),
    15: ("x^2+y^2", "0"),
    16: ("x^2", "y"),
    17: ("x^2", "x"),
    18: ("x^2", "0"),
    19: ("x", "y"),
    20: ("x", "0"),
    21: ("0", "0"),
}


class PencilError(ValueError):
    pass


class WitnessUnavailable(FieldError):
    """Raised when the field policy prevents building a witness."""

    def __init__(self, msg: str, top_type: int, profile=None):
        super().__init__(msg)
        self.top_type = top_type
        self.profile = profile


def canonical_top(k: int) -> QuadMap:
    return _CANON[k]


_CANON = {k: parse_map(*v) for k, v in TOP_FORMS.items()}


@dataclass
class PencilProfile:
    """Certificate for the top-type decision."""

    top_type: int
    degrees: Tuple[int, int]
    det_coeffs: Optional[list] = None          # d3, d2, d1, d0 of det(lam*Mf + mu*Mg)
    root_multiplicities: Optional[list] = None  # sorted, descending
    member_ranks: Optional[list] = None         # rank of the member at each distinct root
    common_kernel: Optional[bool] = None
    binary_double_root: Optional[bool] = None
    rank_f: Optional[int] = None
    note: str = ""

    def to_dict(self) -> dict:
        d = {"top_type": self.top_type, "degrees": list(self.degrees),
             "note": self.note}
        if self.det_coeffs is not None:
            d["det_coeffs"] = [str(c) for c in self.det_coeffs]
        for k in ("root_multiplicities", "member_ranks", "common_kernel",
                  "binary_double_root", "rank_f"):
            v = getattr(self, k)
            if v is not None:
                d[k] = v
        return d


# ---------------------------------------------------------------------------
# normalization of the pair


def normalize_pair(F: QuadMap) -> Tuple[QuadMap, List[Step]]:
    """Target operations making deg f >= deg g and the leading parts independent."""
    tr = Tracker(F)
    for _ in range(6):
        df, dg = tr.F.degree(0), tr.F.degree(1)
        if df < dg:
            tr.tgt(Q, P, "swap components")
            continue
        if df == dg and df >= 1:
            kappa = _proportional(tr.F, df)
            if kappa is not None:
                tr.tgt(P, Q - kappa * P, "cancel proportional leading part")
                continue
        break
    return tr.F, tr.steps


def _proportional(F: QuadMap, d: int):
    sl = slice(0, 6) if d == 2 else slice(6, 9)
    u, v = F.f[sl], F.g[sl]
    k = next(i for i, c in enumerate(u) if not (c == 0))
    kappa = _norm(v[k] / u[k]) if not isinstance(u[k], int) else _norm(v[k] * Fraction(1, u[k]))
    if all(_norm(b - kappa * a) == 0 for a, b in zip(u, v)):
        return kappa
    return None


# ---------------------------------------------------------------------------
# pencil determinant


def det_coeffs(Mf, Mg) -> list:
    """[d3, d2, d1, d0] with det(lam*Mf + mu*Mg) = sum d_k lam^k mu^(3-k)."""
    d3 = la.det(Mf)
    d0 = la.det(Mg)
    s_plus = la.det([[a + b for a, b in zip(r, s)] for r, s in zip(Mf, Mg)])
    s_minus = la.det([[a - b for a, b in zip(r, s)] for r, s in zip(Mf, Mg)])
    e1 = _norm(s_plus - d3 - d0)     # d2 + d1
    e2 = _norm(s_minus - d3 + d0)    # d1 - d2
    h = Fraction(1, 2)
    d1 = _norm((e1 + e2) * h)
    d2 = _norm((e1 - e2) * h)
    return [d3, d2, d1, d0]


def _member(Mf, Mg, lam, mu):
    return [[_norm(lam * a + mu * b) for a, b in zip(r, s)] for r, s in zip(Mf, Mg)]


def _dehom(dc) -> list:
    """P(t) = D(t, 1) as a coefficient list (index = degree)."""
    return u_trim([dc[3], dc[2], dc[1], dc[0]])


def _root_structure(dc):
    """List of (multiplicity, root) where root is ('inf',) or ('t', poly_factor)."""
    Pt = _dehom(dc)
    deg = len(Pt) - 1
    out = []
    if deg < 3:
        out.append((3 - deg, ("inf", None)))
    if deg >= 1:
        for m, h in u_squarefree_decomposition(Pt):
            out.append((m, ("t", h)))
    return out


# ---------------------------------------------------------------------------
# type decision


def classify_top(F: QuadMap) -> Tuple[int, PencilProfile]:
    """Top type (1..21) of a pair already passed through normalize_pair."""
    df, dg = F.degree(0), F.degree(1)
    if df == 2 and dg == 2:
        return _classify_quadratic_pair(F)
    if df == 2:
        M = F.sym_matrix(0)
        r = la.rank(M)
        prof = PencilProfile(0, (df, dg), rank_f=r)
        if dg == 1:
            l = F.linear_form(1)
            if r == 3:
                adj = la.adjugate3(M)
                k = 9 if la.bilinear(adj, l, l) != 0 else 10
            elif r == 2:
                n = la.kernel(M)[0]
                if la.dot(l, n) != 0:
                    k = 12
                else:
                    k = 14 if _divides_form(F, l) else 13
            else:
                k = 17 if _divides_form(F, l) else 16
        else:
            k = {3: 11, 2: 15, 1: 18}[r]
        prof.top_type = k
        return k, prof
    if df == 1:
        k = 19 if dg == 1 else 20
        return k, PencilProfile(k, (df, dg))
    return 21, PencilProfile(21, (df, dg))


def _divides_form(F: QuadMap, l) -> bool:
    """Does the linear form l divide the quadratic part of f?"""
    from .poly import NotDivisible

    fq = F.quadratic_part().to_polys()[0]
    lp = l[0] * X + l[1] * Y + l[2] * Z
    try:
        fq.exact_div(lp)
        return True
    except NotDivisible:
        return False


def _classify_quadratic_pair(F: QuadMap):
    Mf, Mg = F.sym_matrix(0), F.sym_matrix(1)
    dc = det_coeffs(Mf, Mg)
    prof = PencilProfile(0, (2, 2), det_coeffs=dc)
    if all(c == 0 for c in dc):
        ker = la.kernel([list(r) for r in Mf] + [list(r) for r in Mg])
        prof.common_kernel = bool(ker)
        if not ker:
            prof.top_type = 7
            return 7, prof
        n = ker[0]
        bd = _binary_det(Mf, Mg, n)
        double = (_norm(bd[1] * bd[1] - 4 * bd[0] * bd[2]) == 0)
        prof.binary_double_root = double
        k = 8 if double else 6
        prof.top_type = k
        return k, prof
    struct = _root_structure(dc)
    mults = []
    for m, root in struct:
        mults += [m] * _nroots(root)
    mults.sort(reverse=True)
    ranks = []
    for m, root in struct:
        if m >= 2:
            lam, mu = _rational_root(root)
            ranks.append(la.rank(_member(Mf, Mg, lam, mu)))
    prof.root_multiplicities = mults
    prof.member_ranks = ranks
    if mults == [1, 1, 1]:
        k = 1
    elif mults == [2, 1]:
        k = 2 if ranks[0] == 2 else 3
    elif mults == [3]:
        k = 4 if ranks[0] == 2 else 5
    else:
        raise PencilError(f"unexpected root structure {mults}")
    prof.top_type = k
    return k, prof


def _nroots(root) -> int:
    kind, h = root
    return 1 if kind == "inf" else len(h) - 1


def _rational_root(root):
    """(lam, mu) for a root known to lie in the coefficient field."""
    kind, h = root
    if kind == "inf":
        return 1, 0
    if len(h) != 2:
        raise PencilError("repeated root of degree > 1")
    return _norm(-h[0]), 1


def _binary_det(Mf, Mg, n):
    """Coefficients (c0, c1, c2) of the quotient pencil determinant in lam."""
    i, j = _complement_pair(n)
    a = [[Mf[i][i], Mf[i][j]], [Mf[j][i], Mf[j][j]]]
    b = [[Mg[i][i], Mg[i][j]], [Mg[j][i], Mg[j][j]]]
    c2 = la.det(a)
    c0 = la.det(b)
    s = la.det([[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]])
    c1 = _norm(s - c2 - c0)
    return (c0, c1, c2)


def _complement_pair(n):
    """Indices i < j such that e_i, e_j, n form a basis."""
    for i, j in ((0, 1), (0, 2), (1, 2)):
        k = 3 - i - j
        if not (n[k] == 0):
            return i, j
    raise PencilError("zero kernel vector")


# ---------------------------------------------------------------------------
# witnesses


def top_witness(F: QuadMap, k: int, session: Session, perm: Sequence[int] = (0, 1, 2)) -> List[Step]:
    """Linear steps taking the leading part of F to the canonical top of type k."""
    perm = tuple(perm)
    if perm == (0, 1, 2) and top_key(F, k) == top_key(_CANON[k], k):
        return []
    tr = Tracker(F)
    builder = _BUILDERS[k]
    if k == 1:
        builder(tr, session, perm)
    else:
        builder(tr, session)
    if top_key(tr.F, k) != top_key(_CANON[k], k):
        raise PencilError(f"internal: witness for type {k} missed the canonical top")
    return tr.steps


def top_key(F: QuadMap, k: int):
    if k <= 8:
        return F.quadratic_part()
    fq = tuple(F.f[:6])
    if k in (9, 10, 12, 13, 14, 16, 17):
        return fq, tuple(F.g[:9])
    if k in (11, 15, 18):
        return fq, tuple(F.g[:9])
    if k == 19:
        return tuple(F.f[:9]), tuple(F.g[:9])
    if k == 20:
        return tuple(F.f[:9]), tuple(F.g[:9])
    return tuple(F.f[:9]), tuple(F.g[:9])


def _inv(c):
    return Fraction(1, c) if isinstance(c, int) else 1 / c


def _diag_scale(tr: Tracker, s1, s2, s3, label="scale"):
    tr.src_matrix([[s1, 0, 0], [0, s2, 0], [0, 0, s3]], label=label)


def _columns(*vs):
    return [[vs[j][i] for j in range(len(vs))] for i in range(3)]


def pencil_roots(F: QuadMap, session: Session):
    """The three (lam, mu) roots of a type-1 pencil, in the session tower."""
    Mf, Mg = F.sym_matrix(0), F.sym_matrix(1)
    dc = det_coeffs(Mf, Mg)
    Pt = _dehom(dc)
    roots = []
    if len(Pt) - 1 < 3:
        roots.append((1, 0))
    quad = Pt
    if len(Pt) == 4:
        try:
            base_roots = gaussian_rational_roots(Pt)
        except FieldError:
            raise WitnessUnavailable("pencil cubic has coefficients outside Q(i)", 1)
        if base_roots:
            r = base_roots[0]
            roots.append((_norm(r), 1))
            quad, rem = u_divmod(Pt, [_norm(-r), 1])
        else:
            mon = u_monic(Pt)
            raw = tuple(TowerElem.coerce(c).base_value() for c in mon[:3])
            try:
                theta = session.adjoin_cubic_root(raw)
            except CubicNotAllowed as exc:
                raise WitnessUnavailable(str(exc), 1)
            roots.append((theta, 1))
            quad, rem = u_divmod(mon, [-theta, 1])
            quad = [_norm(c) for c in quad]
    if len(quad) == 3:
        c0, c1, c2 = quad
        disc = _norm(c1 * c1 - 4 * c0 * c2)
        r = session.sqrt(disc)
        inv2a = _inv(2 * c2)
        roots.append((_norm((-c1 + r) * inv2a), 1))
        roots.append((_norm((-c1 - r) * inv2a), 1))
    elif len(quad) == 2:
        roots.append((_norm(-quad[0] * _inv(quad[1])), 1))
    if len(roots) != 3:
        raise PencilError("type-1 pencil without three roots")
    return roots


def _order_kernels(vs):
    """Order kernel vectors so that the basis matrix is as diagonal as possible."""
    best = None
    for p in permutations(range(3)):
        score = sum(1 for i in range(3) if not (vs[p[i]][i] == 0))
        if best is None or score > best[0]:
            best = (score, p)
    return [best[1][i] for i in range(3)]


def _w_t1(tr: Tracker, session: Session, perm):
    Mf, Mg = tr.F.sym_matrix(0), tr.F.sym_matrix(1)
    roots = pencil_roots(tr.F, session)
    members = [_member(Mf, Mg, l, m) for l, m in roots]
    vs = [la.normalize_vector(la.kernel(N)[0]) for N in members]
    order = _order_kernels(vs)
    order = [order[p] for p in perm]
    v1, v2, v3 = (vs[i] for i in order)
    (l1, m1), (l2, m2) = roots[order[0]], roots[order[1]]
    N1, N2 = members[order[0]], members[order[1]]
    tr.src_matrix(_columns(v1, v2, v3), label="diagonalize pencil")
    c2 = la.bilinear(N2, v3, v3)
    c1 = la.bilinear(N1, v3, v3)
    tr.tgt_matrix([[_norm(l2 * _inv(c2)), _norm(m2 * _inv(c2))],
                   [_norm(l1 * _inv(c1)), _norm(m1 * _inv(c1))]], label="singular members")
    k1 = tr.a(1)
    k2 = tr.b(4)
    s1 = session.sqrt(k1)
    s2 = session.sqrt(k2)
    _diag_scale(tr, _inv(s1), _inv(s2), 1)


def _double_and_simple(F: QuadMap):
    Mf, Mg = F.sym_matrix(0), F.sym_matrix(1)
    dc = det_coeffs(Mf, Mg)
    dbl = smp = None
    for m, root in _root_structure(dc):
        if m >= 2:
            dbl = _rational_root(root)
        else:
            smp = _rational_root(root)
    return Mf, Mg, dbl, smp


def _w_t2(tr: Tracker, session: Session):
    Mf, Mg, (ld, md), (ls, ms) = _double_and_simple(tr.F)
    Pm = _member(Mf, Mg, ld, md)
    Qm = _member(Mf, Mg, ls, ms)
    v2 = la.normalize_vector(la.kernel(Pm)[0])
    v1 = la.normalize_vector(la.kernel(Qm)[0])
    w0 = None
    for cand in ([1, 0, 0], [0, 1, 0], [0, 0, 1]):
        if la.bilinear(Qm, v2, cand) != 0:
            w0 = cand
            break
    c = _norm(la.bilinear(Qm, w0, w0) * _inv(2 * la.bilinear(Qm, v2, w0)))
    w1 = [_norm(a - c * b) for a, b in zip(w0, v2)]
    c = _norm(la.bilinear(Pm, v1, w1) * _inv(la.bilinear(Pm, v1, v1)))
    w2 = [_norm(a - c * b) for a, b in zip(w1, v1)]
    tr.src_matrix(_columns(v1, v2, w2), label="adapted basis")
    cz = la.bilinear(Pm, w2, w2)
    b = la.bilinear(Qm, v2, w2)
    tr.tgt_matrix([[_norm(ld * _inv(cz)), _norm(md * _inv(cz))],
                   [_norm(ls * _inv(2 * b)), _norm(ms * _inv(2 * b))]], label="members")
    s = session.sqrt(tr.a(1))
    _diag_scale(tr, _inv(s), 1, 1)


def _rank1_factor(M):
    """(c, l) with x^T M x = c * l(x)^2 for a rank-one symmetric M."""
    i = next(i for i in range(3) if not (M[i][i] == 0))
    return _inv(M[i][i]), list(M[i])


def _isotropic_pair(S, k1, k2, session):
    """Two independent isotropic vectors of S on span(k1, k2)."""
    s11 = la.bilinear(S, k1, k1)
    s12 = la.bilinear(S, k1, k2)
    s22 = la.bilinear(S, k2, k2)
    if s11 == 0:
        n1 = list(k1)
        n2 = [_norm(-s22 * a + 2 * s12 * b) for a, b in zip(k1, k2)]
        return n1, n2
    r = session.sqrt(_norm(s12 * s12 - s11 * s22))
    inv = _inv(s11)
    t1 = _norm((-s12 + r) * inv)
    t2 = _norm((-s12 - r) * inv)
    return ([_norm(t1 * a + b) for a, b in zip(k1, k2)],
            [_norm(t2 * a + b) for a, b in zip(k1, k2)])


def _apply_J(tr: Tracker):
    from .field import I

    tr.src(X + I * Y, X - I * Y, Z, label="xy -> x^2+y^2")


def _w_t3(tr: Tracker, session: Session):
    Mf, Mg, (ld, md), (ls, ms) = _double_and_simple(tr.F)
    R = _member(Mf, Mg, ld, md)
    S = _member(Mf, Mg, ls, ms)
    c, l = _rank1_factor(R)
    v = la.kernel(S)[0]
    v = [_norm(x * _inv(la.dot(l, v))) for x in v]
    k1, k2 = la.kernel([l])
    n1, n2 = _isotropic_pair(S, k1, k2, session)
    sc = _inv(2 * la.bilinear(S, n1, n2))
    n2 = [_norm(sc * x) for x in n2]
    tr.src_matrix(_columns(n1, n2, v), label="isotropic basis")
    tr.tgt_matrix([[ls, ms], [_norm(ld * _inv(c)), _norm(md * _inv(c))]], label="members")
    _apply_J(tr)


def _triple(F: QuadMap):
    Mf, Mg = F.sym_matrix(0), F.sym_matrix(1)
    dc = det_coeffs(Mf, Mg)
    (m, root), = _root_structure(dc)
    lam, mu = _rational_root(root)
    R = _member(Mf, Mg, lam, mu)
    for (a, b) in ((1, 0), (0, 1), (1, 1)):
        S = _member(Mf, Mg, a, b)
        if la.det(S) != 0:
            return (lam, mu), R, (a, b), S
    raise PencilError("no nondegenerate member")


def _w_t4(tr: Tracker, session: Session):
    (lr, mr), R, (ls, ms), S = _triple(tr.F)
    A = la.matmul(la.inverse(S), R)
    w = next(e for e in ([1, 0, 0], [0, 1, 0], [0, 0, 1])
             if any(not (x == 0) for x in la.matvec(A, la.matvec(A, e))))
    Aw = la.matvec(A, w)
    A2w = la.matvec(A, Aw)
    s0 = la.bilinear(S, w, w)
    s1 = la.bilinear(S, w, Aw)
    s2 = la.bilinear(S, w, A2w)
    b = 0 if s1 != 0 else 1
    c = _norm(-(s0 + 2 * b * s1 + b * b * s2) * _inv(2 * s2))
    w = [_norm(x + b * y + c * z) for x, y, z in zip(w, Aw, A2w)]
    Aw = la.matvec(A, w)
    A2w = la.matvec(A, Aw)
    s1 = la.bilinear(S, w, Aw)
    s2 = la.bilinear(S, w, A2w)
    tau = _inv(s1)
    sigma = _norm(s2 * _inv(s1 * s1))
    kk = _norm(tau * _inv(sigma))
    b1 = [_norm(kk * u - kk * kk * v) for u, v in zip(Aw, A2w)]
    b3 = [_norm(kk * kk * v) for v in A2w]
    tr.src_matrix(_columns(b1, w, b3), label="nilpotent basis")
    tr.tgt_matrix([[_norm(sigma * ls), _norm(sigma * ms)], [_norm(tau * lr), _norm(tau * mr)]],
                  label="members")


def _w_t5(tr: Tracker, session: Session):
    (lr, mr), R, (ls, ms), S = _triple(tr.F)
    A = la.matmul(la.inverse(S), R)
    _, l = _rank1_factor(R)
    w = next(e for e in ([1, 0, 0], [0, 1, 0], [0, 0, 1])
             if any(not (x == 0) for x in la.matvec(A, e)))
    Aw = la.matvec(A, w)
    s0 = la.bilinear(S, w, w)
    s1 = la.bilinear(S, w, Aw)
    w = [_norm(x - s0 * _inv(2 * s1) * y) for x, y in zip(w, Aw)]
    Aw = la.matvec(A, w)
    s1 = la.bilinear(S, w, Aw)
    Sw = la.matvec(S, w)
    cands = la.kernel([l, Sw])
    if len(cands) == 1:
        u = cands[0]
    else:
        u = next(v for v in cands if la.bilinear(S, v, v) != 0)
    sigma = _inv(la.bilinear(S, u, u))
    tau = _inv(s1)
    kk = _norm(tau * _inv(sigma))
    b2 = [_norm(kk * v) for v in Aw]
    tr.src_matrix(_columns(u, b2, w), label="adapted basis")
    tr.tgt_matrix([[_norm(sigma * ls), _norm(sigma * ms)], [_norm(tau * lr), _norm(tau * mr)]],
                  label="members")


def _complement_covector(rows):
    for e in ([1, 0, 0], [0, 1, 0], [0, 0, 1]):
        if la.rank(list(rows) + [e]) > len(rows):
            return e
    raise PencilError("no complement")


def _w_t6(tr: Tracker, session: Session):
    Mf, Mg = tr.F.sym_matrix(0), tr.F.sym_matrix(1)
    n = la.kernel([list(r) for r in Mf] + [list(r) for r in Mg])[0]
    c0, c1, c2 = _binary_det(Mf, Mg, n)
    # roots of c2 lam^2 + c1 lam mu + c0 mu^2
    roots = []
    if c2 == 0:
        roots = [(1, 0), (_norm(-c0 * _inv(c1)), 1) if c1 != 0 else None]
    else:
        r = session.sqrt(_norm(c1 * c1 - 4 * c0 * c2))
        inv = _inv(2 * c2)
        roots = [(_norm((-c1 + r) * inv), 1), (_norm((-c1 - r) * inv), 1)]
    (la1, mu1), (la2, mu2) = roots
    c_1, l1 = _rank1_factor(_member(Mf, Mg, la1, mu1))
    c_2, l2 = _rank1_factor(_member(Mf, Mg, la2, mu2))
    k = _complement_covector([l1, l2])
    tr.dual_basis([l1, l2, k], label="factor members")
    tr.tgt_matrix([[_norm(la1 * _inv(c_1)), _norm(mu1 * _inv(c_1))],
                   [_norm(la2 * _inv(c_2)), _norm(mu2 * _inv(c_2))]], label="members")


def _lin_poly(l):
    return l[0] * X + l[1] * Y + l[2] * Z


def _quot_covector(F: QuadMap, i: int, l):
    """Covector m with (quadratic part of component i) = l * m."""
    fq = F.quadratic_part().to_polys()[i]
    m = fq.exact_div(_lin_poly(l))
    return [m.coeff({"x": 1}), m.coeff({"y": 1}), m.coeff({"z": 1})]


def _w_t7(tr: Tracker, session: Session):
    Mf, Mg = tr.F.sym_matrix(0), tr.F.sym_matrix(1)
    kf = la.kernel(Mf)[0]
    kg = la.kernel(Mg)[0]
    l = la.cross(kf, kg)
    m1 = _quot_covector(tr.F, 0, l)
    m2 = _quot_covector(tr.F, 1, l)
    tr.dual_basis([m1, l, m2], label="common factor")


def _w_t8(tr: Tracker, session: Session):
    Mf, Mg = tr.F.sym_matrix(0), tr.F.sym_matrix(1)
    n = la.kernel([list(r) for r in Mf] + [list(r) for r in Mg])[0]
    c0, c1, c2 = _binary_det(Mf, Mg, n)
    if c2 == 0:
        lam, mu = 1, 0
    else:
        lam, mu = _norm(-c1 * _inv(2 * c2)), 1
    R = _member(Mf, Mg, lam, mu)
    c, l = _rank1_factor(R)
    # a member different from R
    if mu == 0:
        sl, sm, comp = 0, 1, 1
    else:
        sl, sm, comp = 1, 0, 0
    m = _quot_covector(tr.F, comp, l)
    k = _complement_covector([m, l])
    tr.dual_basis([m, l, k], label="factor members")
    tr.tgt_matrix([[sl, sm], [_norm(lam * _inv(c)), _norm(mu * _inv(c))]], label="members")


# lower-degree pairs -------------------------------------------------------------


def _w_t9(tr: Tracker, session: Session):
    M = tr.F.sym_matrix(0)
    l = tr.F.linear_form(1)
    v = la.matvec(la.inverse(M), l)
    v = [_norm(x * _inv(la.dot(l, v))) for x in v]
    fv = la.bilinear(M, v, v)
    k1, k2 = la.kernel([l])
    n1, n2 = _isotropic_pair(M, k1, k2, session)
    sc = _norm(fv * _inv(2 * la.bilinear(M, n1, n2)))
    n2 = [_norm(sc * x) for x in n2]
    tr.src_matrix(_columns(v, n1, n2), label="pole and isotropic lines")
    tr.tgt_matrix([[_inv(fv), 0], [0, 1]], label="scale")


def _w_t10(tr: Tracker, session: Session):
    M = tr.F.sym_matrix(0)
    l = tr.F.linear_form(1)
    v = la.matvec(la.inverse(M), l)
    ker = la.kernel([l])
    b1 = next(u for u in ker if la.rank([u, v]) == 2)
    a = la.bilinear(M, b1, b1)
    b = next(e for e in ([1, 0, 0], [0, 1, 0], [0, 0, 1]) if la.dot(l, e) != 0)
    b = [_norm(x * _inv(la.dot(l, b))) for x in b]
    cc = _norm(la.bilinear(M, b1, b) * _inv(a))
    b = [_norm(x - cc * y) for x, y in zip(b, b1)]
    tt = _norm(-la.bilinear(M, b, b) * Fraction(1, 2))
    b = [_norm(x + tt * y) for x, y in zip(b, v)]
    kappa = _norm(a * Fraction(1, 2))
    b3 = [_norm(kappa * x) for x in v]
    tr.src_matrix(_columns(b1, b, b3), label="tangent frame")
    tr.tgt_matrix([[_inv(a), 0], [0, 1]], label="scale")


def _orthonormal(tr: Tracker, session: Session, M):
    """Basis diagonalizing a rank-3 form, scaled to x^2+y^2+z^2."""
    basis = []
    cands = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1],
             [1, 2, 0], [1, 0, 2], [0, 1, 2], [1, 2, 3]]
    for c in cands:
        w = list(c)
        for b in basis:
            coef = _norm(la.bilinear(M, w, b) * _inv(la.bilinear(M, b, b)))
            w = [_norm(x - coef * y) for x, y in zip(w, b)]
        if all(x == 0 for x in w) or la.bilinear(M, w, w) == 0:
            continue
        if la.rank(basis + [w]) <= len(basis):
            continue
        basis.append(w)
        if len(basis) == 3:
            break
    scaled = []
    for w in basis:
        s = session.sqrt(la.bilinear(M, w, w))
        scaled.append([_norm(x * _inv(s)) for x in w])
    return scaled


def _w_t11(tr: Tracker, session: Session):
    M = tr.F.sym_matrix(0)
    b = _orthonormal(tr, session, M)
    tr.src_matrix(_columns(*b), label="orthonormal frame")


def factor_rank2(M, session: Session):
    """Covectors (l1, l2) with x^T M x = l1(x) * l2(x) for rank-two M."""
    n = la.kernel(M)[0]
    i, j = _complement_pair(n)
    ei = [1 if k == i else 0 for k in range(3)]
    ej = [1 if k == j else 0 for k in range(3)]
    K = la.inverse(_columns(ei, ej, n))
    rx, ry = K[0], K[1]
    s11, s12, s22 = M[i][i], M[i][j], M[j][j]
    if s11 == 0:
        return list(ry), [_norm(2 * s12 * a + s22 * b) for a, b in zip(rx, ry)]
    r = session.sqrt(_norm(s12 * s12 - s11 * s22))
    inv = _inv(s11)
    r1 = _norm((-s12 + r) * inv)
    r2 = _norm((-s12 - r) * inv)
    l1 = [_norm(a - r1 * b) for a, b in zip(rx, ry)]
    l2 = [_norm(s11 * (a - r2 * b)) for a, b in zip(rx, ry)]
    return l1, l2


def _w_t12(tr: Tracker, session: Session):
    l1, l2 = factor_rank2(tr.F.sym_matrix(0), session)
    tr.dual_basis([l1, l2, tr.F.linear_form(1)], label="factor f")
    _apply_J(tr)


def _w_t13(tr: Tracker, session: Session):
    l1, l2 = factor_rank2(tr.F.sym_matrix(0), session)
    l = tr.F.linear_form(1)
    k = _complement_covector([l1, l2])
    # l = alpha*l1 + beta*l2
    sol = la.solve(_columns(l1, l2, k), l)
    alpha, beta = sol[0], sol[1]
    tr.dual_basis([[_norm(alpha * x) for x in l1], [_norm(beta * x) for x in l2], k],
                  label="factor f")
    tr.tgt_matrix([[_norm(alpha * beta), 0], [0, Fraction(1, 2)]], label="scale")
    _apply_J(tr)


def _w_t14(tr: Tracker, session: Session):
    l = tr.F.linear_form(1)
    m = _quot_covector(tr.F, 0, l)
    k = _complement_covector([l, m])
    tr.dual_basis([l, m, k], label="factor f")


def _w_t15(tr: Tracker, session: Session):
    l1, l2 = factor_rank2(tr.F.sym_matrix(0), session)
    k = _complement_covector([l1, l2])
    tr.dual_basis([l1, l2, k], label="factor f")
    _apply_J(tr)


def _w_t16(tr: Tracker, session: Session):
    c, m = _rank1_factor(tr.F.sym_matrix(0))
    l = tr.F.linear_form(1)
    k = _complement_covector([m, l])
    tr.dual_basis([m, l, k], label="square and line")
    tr.tgt_matrix([[_inv(c), 0], [0, 1]], label="scale")


def _w_t17(tr: Tracker, session: Session):
    c, m = _rank1_factor(tr.F.sym_matrix(0))
    l = tr.F.linear_form(1)
    alpha = next(_norm(a * _inv(b)) for a, b in zip(l, m) if not (b == 0))
    k1 = _complement_covector([m])
    k2 = _complement_covector([m, k1])
    tr.dual_basis([m, k1, k2], label="square")
    tr.tgt_matrix([[_inv(c), 0], [0, _inv(alpha)]], label="scale")


def _w_t18(tr: Tracker, session: Session):
    c, m = _rank1_factor(tr.F.sym_matrix(0))
    k1 = _complement_covector([m])
    k2 = _complement_covector([m, k1])
    tr.dual_basis([m, k1, k2], label="square")
    tr.tgt_matrix([[_inv(c), 0], [0, 1]], label="scale")


def _w_t19(tr: Tracker, session: Session):
    l1, l2 = tr.F.linear_form(0), tr.F.linear_form(1)
    tr.dual_basis([l1, l2, _complement_covector([l1, l2])], label="linear coordinates")


def _w_t20(tr: Tracker, session: Session):
    l1 = tr.F.linear_form(0)
    k1 = _complement_covector([l1])
    tr.dual_basis([l1, k1, _complement_covector([l1, k1])], label="linear coordinate")


def _w_t21(tr: Tracker, session: Session):
    return


_BUILDERS = {1: _w_t1, 2: _w_t2, 3: _w_t3, 4: _w_t4, 5: _w_t5, 6: _w_t6, 7: _w_t7, 8: _w_t8,
             9: _w_t9, 10: _w_t10, 11: _w_t11, 12: _w_t12, 13: _w_t13, 14: _w_t14,
             15: _w_t15, 16: _w_t16, 17: _w_t17, 18: _w_t18, 19: _w_t19, 20: _w_t20,
             21: _w_t21}


def classify_and_witness(F: QuadMap, session: Session, perm=(0, 1, 2)):
    """normalize_pair, decide the type and build the linear witness.

    Returns (k, profile, steps) where ``steps`` starts with the normalization.
    """
    G, steps = normalize_pair(F)
    k, prof = classify_top(G)
    steps = steps + top_witness(G, k, session, perm)
    return k, prof, steps
