"""Exact linear algebra over Q (thin wrappers around flint matrices)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from flint import fmpq, fmpq_mat, fmpz_mat, fmpz_poly


class InconsistentSystem(ValueError):
    pass


class Underdetermined(ValueError):
    pass


def _q(x):
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    return fmpq(int(x))


def _f(x):
    return Fraction(int(x.p), int(x.q))


def qmat(rows, ncols=None):
    rows = [list(r) for r in rows]
    n = len(rows)
    m = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    return fmpq_mat(n, m, [_q(x) for r in rows for x in r])


def to_rows(M):
    return [[_f(M[i, j]) for j in range(M.ncols())] for i in range(M.nrows())]


def _integral_rows(rows):
    """Scale each row to integers (row-wise lcm of denominators)."""
    out = []
    for r in rows:
        d = 1
        for x in r:
            x = Fraction(x)
            d = d // gcd(d, x.denominator) * x.denominator
        out.append([int(Fraction(x) * d) for x in r])
    return out


def rref(rows):
    """Reduced row echelon form; returns ``(rows, pivots)``."""
    if not rows:
        return [], []
    M = qmat(rows)
    R, rank = M.rref()
    out = to_rows(R)[:rank]
    pivots = [next(j for j, x in enumerate(r) if x) for r in out]
    return out, pivots


def rank(rows):
    if not rows or not rows[0]:
        return 0
    return fmpz_mat(_integral_rows(rows)).rank()


def nullspace(rows, ncols=None):
    """Basis of ``{x : A x = 0}`` for the matrix with the given rows, in echelon form."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    A = fmpz_mat(_integral_rows(rows))
    X, nullity = A.nullspace()
    vecs = [[Fraction(int(X[i, k])) for i in range(ncols)] for k in range(nullity)]
    if not vecs:
        return []
    basis, _ = rref(vecs)
    return basis


def left_kernel(rows):
    """Basis of ``{y : y A = 0}``."""
    if not rows:
        return []
    cols = [list(c) for c in zip(*rows)]
    return nullspace(cols, ncols=len(rows))


def solve_left(target, rows):
    """Solve ``y A = target`` exactly; raises if inconsistent or not unique."""
    n = len(rows)
    A = [list(r) for r in rows]
    aug = [list(c) + [t] for c, t in zip(zip(*A), target)]
    # columns of A become equations in the unknowns y
    R, piv = rref(aug)
    if any(p == n for p in piv):
        raise InconsistentSystem("no solution")
    if len(piv) < n:
        raise Underdetermined("solution is not unique")
    y = [Fraction(0)] * n
    for r, p in zip(R, piv):
        y[p] = r[n]
    return y


def charpoly(rows):
    """Characteristic polynomial ``det(x I - M)`` as a list of Fractions, low degree first."""
    M = qmat(rows)
    return [_f(c) for c in M.charpoly().coeffs()]


def charpoly_int(rows):
    cp = charpoly(rows)
    if any(c.denominator != 1 for c in cp):
        raise ValueError("characteristic polynomial is not integral")
    return fmpz_poly([int(c) for c in cp])


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


def inverse(rows):
    return to_rows(qmat(rows).inv())


def determinant(rows):
    if not rows:
        return Fraction(1)
    return _f(qmat(rows).det())
