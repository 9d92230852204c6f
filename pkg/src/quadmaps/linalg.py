"""Small exact dense linear algebra over duck-typed scalars."""
from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from .poly import _norm


def _inv(c):
    return Fraction(1, c) if isinstance(c, int) else 1 / c


def zeros(n: int, m: int) -> List[list]:
    return [[0] * m for _ in range(n)]


def identity(n: int) -> List[list]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence]) -> List[list]:
    return [list(r) for r in zip(*A)]


def matmul(A, B) -> List[list]:
    n, k, m = len(A), len(B), len(B[0])
    out = zeros(n, m)
    for i in range(n):
        for j in range(m):
            s = 0
            for r in range(k):
                a = A[i][r]
                if a == 0:
                    continue
                b = B[r][j]
                if b == 0:
                    continue
                s = s + a * b
            out[i][j] = _norm(s)
    return out


def matvec(A, v) -> list:
    return [_norm(sum((a * b for a, b in zip(row, v) if not (a == 0 or b == 0)), 0)) for row in A]


def dot(u, v):
    return _norm(sum((a * b for a, b in zip(u, v) if not (a == 0 or b == 0)), 0))


def bilinear(M, u, v):
    return dot(u, matvec(M, v))


def det(A) -> object:
    n = len(A)
    if n == 1:
        return A[0][0]
    if n == 2:
        return _norm(A[0][0] * A[1][1] - A[0][1] * A[1][0])
    if n == 3:
        a, b, c = A[0]
        d, e, f = A[1]
        g, h, i = A[2]
        return _norm(a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g))
    M = [list(r) for r in A]
    sign = 1
    result = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if not (M[r][k] == 0)), None)
        if piv is None:
            return 0
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        result = result * M[k][k]
        inv = _inv(M[k][k])
        for r in range(k + 1, n):
            f = M[r][k] * inv
            if f == 0:
                continue
            for j in range(k, n):
                M[r][j] = _norm(M[r][j] - f * M[k][j])
    return _norm(result * sign)


def rref(A):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    M = [list(r) for r in A]
    n, m = len(M), len(M[0]) if M else 0
    pivots = []
    row = 0
    for col in range(m):
        piv = next((r for r in range(row, n) if not (M[r][col] == 0)), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = _inv(M[row][col])
        M[row] = [_norm(x * inv) for x in M[row]]
        for r in range(n):
            if r != row and not (M[r][col] == 0):
                f = M[r][col]
                M[r] = [_norm(x - f * y) for x, y in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
        if row == n:
            break
    return M, pivots


def rank(A) -> int:
    if not A:
        return 0
    return len(rref(A)[1])


def kernel(A) -> List[list]:
    """Basis of the right null space; each vector has its pivot-free entry 1."""
    m = len(A[0])
    R, piv = rref(A)
    free = [j for j in range(m) if j not in piv]
    basis = []
    for f in free:
        v = [0] * m
        v[f] = 1
        for i, p in enumerate(piv):
            v[p] = _norm(-R[i][f])
        basis.append(v)
    return basis


def inverse(A) -> List[list]:
    n = len(A)
    aug = [list(A[i]) + identity(n)[i] for i in range(n)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in R]


def adjugate3(A) -> List[list]:
    """Adjugate of a 3x3 matrix."""
    def minor(i, j):
        rows = [r for k, r in enumerate(A) if k != i]
        m = [[x for l, x in enumerate(r) if l != j] for r in rows]
        return _norm(m[0][0] * m[1][1] - m[0][1] * m[1][0])

    return [[_norm((-1) ** (i + j) * minor(j, i)) for j in range(3)] for i in range(3)]


def normalize_vector(v):
    """Scale so that the first nonzero entry is 1."""
    for x in v:
        if not (x == 0):
            inv = _inv(x)
            return [_norm(y * inv) for y in v]
    return list(v)


def cross(u, v):
    return [_norm(u[1] * v[2] - u[2] * v[1]),
            _norm(u[2] * v[0] - u[0] * v[2]),
            _norm(u[0] * v[1] - u[1] * v[0])]


def solve(A, b) -> list:
    """Solve A x = b (A square, invertible)."""
    return matvec(inverse(A), b)


def complete_basis(vectors: Sequence[Sequence], n: int = 3) -> List[list]:
    """Extend linearly independent vectors by standard basis vectors."""
    out = [list(v) for v in vectors]
    for i in range(n):
        if len(out) == n:
            break
        e = [1 if j == i else 0 for j in range(n)]
        if rank(out + [e]) > len(out):
            out.append(e)
    return out
