"""Step recorder used while normalizing a map."""
from __future__ import annotations

from typing import List, Sequence

from . import linalg as la
from .maps import QuadMap, SourceAut, Step, TargetAut
from .poly import Poly

X, Y, Z = (Poly.var(n, ("x", "y", "z")) for n in ("x", "y", "z"))
P, Q = (Poly.var(n, ("p", "q")) for n in ("p", "q"))


class Tracker:
    """Holds the current map and the steps applied so far.

    Coefficients use the order x^2, xy, xz, y^2, yz, z^2, x, y, z, 1 and are
    read with ``a(k)`` / ``b(k)`` for k = 1..10.
    """

    def __init__(self, F: QuadMap, steps: Sequence[Step] = ()):
        self.start = F
        self.F = F
        self.steps: List[Step] = list(steps)

    def a(self, k: int):
        return self.F.f[k - 1]

    def b(self, k: int):
        return self.F.g[k - 1]

    def apply(self, phi: SourceAut, psi: TargetAut, label: str = ""):
        if phi.is_identity() and psi.is_identity():
            return
        self.F = self.F.conjugate(phi, psi)
        self.steps.append(Step(phi, psi, label))

    def src(self, xe, ye, ze, label: str = ""):
        self.apply(SourceAut.from_exprs([xe, ye, ze]), TargetAut.identity(), label)

    def tgt(self, pe, qe, label: str = ""):
        self.apply(SourceAut.identity(), TargetAut.from_exprs([pe, qe]), label)

    def both(self, src_exprs, tgt_exprs, label: str = ""):
        self.apply(SourceAut.from_exprs(src_exprs), TargetAut.from_exprs(tgt_exprs), label)

    def src_matrix(self, L, t=(0, 0, 0), label: str = ""):
        self.apply(SourceAut(L, t), TargetAut.identity(), label)

    def tgt_matrix(self, N, s=(0, 0), label: str = ""):
        self.apply(SourceAut.identity(), TargetAut(N, s), label)

    def dual_basis(self, rows, label: str = ""):
        """Change coordinates so that the given covectors become x, y, z."""
        self.src_matrix(la.inverse(rows), label=label)

    def kill_constants(self, label: str = "drop constants"):
        c1, c2 = self.a(10), self.b(10)
        if c1 == 0 and c2 == 0:
            return
        self.tgt_matrix(la.identity(2), (-c1, -c2), label)

    def extend(self, steps: Sequence[Step]):
        for st in steps:
            self.apply(st.phi, st.psi, st.label)
