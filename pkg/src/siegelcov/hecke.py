"""Hecke operators ``T(p)`` on vector-valued Siegel modular forms of degree 2.

Fourier indices are half-integral matrices ``T = [[n, r/2], [r/2, m]]``,
stored in the expansions under the key ``(2n, 2m, 2r)``.  The weight is
``rho = Sym^j (x) det^k`` where ``Sym^j(M)`` maps the coefficient vector of
``P(X, Y)`` to that of ``P((X, Y) M)``; with this realization
``a(D T D^t) = det(D)^k Sym^j(D) a(T)`` for ``D`` in ``GL_2(Z)``.

Summing over the ``p^3 + p^2 + p + 1`` left cosets of
``Gamma diag(1, 1, p, p) Gamma`` (upper block-triangular ``[[A, B], [0, D]]``
with ``A D^t = p``) and carrying out the sums over the shifts ``B`` gives

    a(T; T(p) F) = a(pT) + p^(k-2) sum_D Sym^j(adj D) a(D T D^t / p)
                   + p^(2k+j-3) a(T / p)

with ``D`` running over ``[[1, u], [0, p]]`` (``0 <= u < p``) and
``[[p, 0], [0, 1]]``; terms whose index is not half-integral are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from flint import fmpz_poly

from . import linalg
from .fourier import PrecisionError

# Global normalization: a(T; T(p)F) carries p^NORMALIZATION in front of a(pT).
# Fixed once against lambda_2(chi_{12,6}) = -240 and checked on every other space.
NORMALIZATION = 0


class HeckeError(ValueError):
    pass


class NotStable(HeckeError):
    """The image of the basis is not in its span within the available precision."""


def sym_action(M, v):
    """Coefficient vector of ``P((X, Y) M)`` where ``P = sum v_i X^(j-i) Y^i``."""
    j = len(v) - 1
    (a, b), (c, d) = M
    out = [Fraction(0)] * (j + 1)
    for i, vi in enumerate(v):
        if not vi:
            continue
        # (aX + cY)^(j-i) (bX + dY)^i
        p1 = [comb(j - i, s) * a ** (j - i - s) * c ** s for s in range(j - i + 1)]
        p2 = [comb(i, s) * b ** (i - s) * d ** s for s in range(i + 1)]
        for s1, x in enumerate(p1):
            if not x:
                continue
            for s2, y in enumerate(p2):
                if y:
                    out[s1 + s2] += vi * x * y
    return out


def index_key(n, m, r):
    """Expansion key of the half-integral index ``[[n, r/2], [r/2, m]]``."""
    return (2 * n, 2 * m, 2 * r)


def _conjugate(D, n, m, r, p):
    """Index ``D T D^t / p`` or ``None`` if it is not half-integral."""
    (a, b), (c, d) = D
    # entries of D T D^t with T = [[n, r/2], [r/2, m]], doubled off-diagonal
    n2 = a * a * n + a * b * r + b * b * m
    m2 = c * c * n + c * d * r + d * d * m
    r2 = 2 * a * c * n + (a * d + b * c) * r + 2 * b * d * m
    if n2 % p or m2 % p or r2 % p:
        return None
    return n2 // p, m2 // p, r2 // p


def coset_matrices(p):
    """The ``D`` blocks of the middle cosets."""
    return [((1, u), (0, p)) for u in range(p)] + [((p, 0), (0, 1))]


def _adj(D):
    (a, b), (c, d) = D
    return ((d, -b), (-c, a))


def _mat_mul(A, B):
    return tuple(tuple(sum(A[i][t] * B[t][l] for t in range(2)) for l in range(2))
                 for i in range(2))


def reduce_index(n, m, r):
    """Reduced ``(n0, m0, r0)`` and ``U`` in ``GL_2(Z)`` with ``T = U T0 U^t``.

    ``T0`` satisfies ``|r0| <= n0 <= m0``.
    """
    if n < 0 or m < 0 or 4 * n * m < r * r:
        raise ValueError(f"index {(n, m, r)} is not positive semi-definite")
    E = ((1, 0), (0, 1))
    while True:
        if n > m:
            n, m, r = m, n, r
            E = _mat_mul(((0, 1), (1, 0)), E)
        elif n and abs(r) > n:
            s = (r + n) // (2 * n)
            # E' T E'^t with E' = [[1, 0], [-s, 1]]
            m, r = m - s * r + s * s * n, r - 2 * s * n
            E = _mat_mul(((1, 0), (-s, 1)), E)
        else:
            break
    (a, b), (c, d) = E
    det = a * d - b * c
    U = ((d * det, -b * det), (-c * det, a * det))
    return (n, m, r), U


def coefficient(F, n, m, r, k=None):
    """``a(T)`` for any index, reducing by ``GL_2(Z)`` when ``T`` lies past the precision."""
    if 2 * (n + m) <= F.prec:
        return list(F.coefficient(*index_key(n, m, r)))
    k = F.k if k is None else k
    (n0, m0, r0), U = reduce_index(n, m, r)
    if 2 * (n0 + m0) > F.prec:
        raise PrecisionError(f"reduced index {(n0, m0, r0)} beyond precision {F.prec}")
    v = F.coefficient(*index_key(n0, m0, r0))
    det = U[0][0] * U[1][1] - U[0][1] * U[1][0]
    return [det ** k * x for x in sym_action(U, v)]


def required_precision(p, indices):
    """Expansion precision needed to evaluate ``T(p)`` at the given indices."""
    return max(2 * p * (n + m) for n, m, _ in indices)


def hecke_coefficient(F, p, n, m, r, weight=None):
    """Coefficient vector of ``T(p) F`` at the index ``[[n, r/2], [r/2, m]]``."""
    j, k = weight if weight is not None else F.weight
    if 2 * p * (n + m) > F.prec:
        raise PrecisionError(f"T({p}) at {(n, m, r)} needs precision {2 * p * (n + m)}")
    out = list(F.coefficient(*index_key(p * n, p * m, p * r)))
    c_mid = Fraction(p) ** (k - 2)
    for D in coset_matrices(p):
        idx = _conjugate(D, n, m, r, p)
        if idx is None:
            continue
        v = coefficient(F, *idx, k=k)
        if any(v):
            w = sym_action(_adj(D), v)
            out = [x + c_mid * y for x, y in zip(out, w)]
    if n % p == 0 and m % p == 0 and r % p == 0:
        v = F.coefficient(*index_key(n // p, m // p, r // p))
        c_low = Fraction(p) ** (2 * k + j - 3)
        out = [x + c_low * y for x, y in zip(out, v)]
    scale = Fraction(p) ** NORMALIZATION
    return [x * scale for x in out]


def default_indices(prec, p, cap=None):
    """Positive-definite half-integral indices usable for ``T(p)`` at this precision."""
    out = []
    total = prec // (2 * p)
    if cap is not None:
        total = min(total, cap)
    for s in range(2, total + 1):
        for n in range(1, s):
            m = s - n
            for r in range(-2 * int((n * m) ** 0.5) - 1, 2 * int((n * m) ** 0.5) + 2):
                if 4 * n * m - r * r > 0:
                    out.append((n, m, r))
    return out


@dataclass
class HeckeMatrix:
    """Matrix of ``T(p)``: row ``i`` holds the coordinates of ``T(p) basis[i]``."""

    weight: tuple
    character: int
    p: int
    rows: list
    labels: tuple = ()

    def charpoly(self):
        return charpoly(self)

    def to_dict(self):
        return {
            "weight": list(self.weight),
            "character": self.character,
            "p": self.p,
            "labels": list(self.labels),
            "matrix": [[str(x) for x in r] for r in self.rows],
            "charpoly": [str(c) for c in linalg.charpoly(self.rows)],
        }


def siegel_hecke(p, basis, weight=None, indices=None, labels=()):
    """Matrix of ``T(p)`` on the span of ``basis`` (a list of VectorExpansion)."""
    basis = list(basis)
    if not basis:
        raise HeckeError("empty basis")
    weight = tuple(weight) if weight is not None else basis[0].weight
    if len({F.weight for F in basis}) != 1:
        raise HeckeError("basis mixes weights")
    chars = {F.character for F in basis}
    if len(chars) != 1:
        raise HeckeError("basis mixes characters")
    prec = min(F.prec for F in basis)
    if indices is None:
        indices = default_indices(prec, p)
    if not indices:
        raise PrecisionError(f"precision {prec} too low for T({p})")
    need = required_precision(p, indices)
    if need > prec:
        raise PrecisionError(f"T({p}) needs precision {need}, basis has {prec}")
    rows = []
    for F in basis:
        row = []
        for n, m, r in indices:
            row.extend(F.coefficient(*index_key(n, m, r)))
        rows.append(row)
    if linalg.rank(rows) < len(basis):
        raise PrecisionError("basis is not separated by the chosen coefficients")
    out = []
    for F in basis:
        img = []
        for n, m, r in indices:
            img.extend(hecke_coefficient(F, p, n, m, r, weight))
        try:
            out.append(linalg.solve_left(img, rows))
        except linalg.InconsistentSystem as exc:
            raise NotStable(f"T({p}) image leaves the span of the basis") from exc
    return HeckeMatrix(weight, chars.pop(), p, out, tuple(labels))


def eigenvalue(p, F, weight=None, indices=None):
    """``lambda_p`` of a single eigenform."""
    M = siegel_hecke(p, [F], weight, indices)
    return M.rows[0][0]


def charpoly(M):
    """Exact characteristic polynomial (``fmpz_poly`` when integral)."""
    rows = M.rows if isinstance(M, HeckeMatrix) else M
    cp = linalg.charpoly(rows)
    if all(c.denominator == 1 for c in cp):
        return fmpz_poly([int(c) for c in cp])
    return cp


def rescale_poly(g, s):
    """``s^deg * g(x / s)`` for an integer polynomial ``g``."""
    g = fmpz_poly(g) if not isinstance(g, fmpz_poly) else g
    n = g.degree()
    return fmpz_poly([int(g[i]) * s ** (n - i) for i in range(n + 1)])


def quadratic_form_of_roots(cp):
    """For a monic quadratic ``x^2 + b x + c``: ``(u, v, D)`` with roots ``u +- v sqrt(D)``.

    ``D`` is square-free and ``u, v`` rational.
    """
    cp = fmpz_poly(cp) if not isinstance(cp, fmpz_poly) else cp
    if cp.degree() != 2 or cp[2] != 1:
        raise ValueError("expected a monic quadratic")
    b, c = int(cp[1]), int(cp[0])
    disc = b * b - 4 * c
    sign = -1 if disc < 0 else 1
    n = abs(disc)
    sq, core = 1, 1
    f = 2
    while f * f <= n:
        while n % (f * f) == 0:
            n //= f * f
            sq *= f
        if n % f == 0:
            core *= f
            n //= f
        f += 1
    core *= n
    return Fraction(-b, 2), Fraction(sq, 2), sign * core


# ---------------------------------------------------------------------------
# algebraic numbers through minimal polynomials


def _rational_roots(f):
    coeffs = [int(c) for c in f.coeffs()]
    a0, an = coeffs[0], coeffs[-1]
    if a0 == 0:
        return [Fraction(0)]
    roots = []
    for p in _divisors(abs(a0)):
        for q in _divisors(abs(an)):
            for s in (1, -1):
                x = Fraction(s * p, q)
                if sum(c * x ** i for i, c in enumerate(coeffs)) == 0:
                    roots.append(x)
    return roots


def _divisors(n):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.extend({d, n // d})
        d += 1
    return out


def is_irreducible(f):
    """Irreducibility over Q.

    Uses flint's factorization when available and a rational-root check
    (exact for degree <= 3) otherwise.
    """
    f = fmpz_poly(f) if not isinstance(f, fmpz_poly) else f
    if f.degree() < 1:
        return False
    try:
        _, factors = f.factor()
        return len(factors) == 1 and factors[0][1] == 1
    except AttributeError:
        if f.degree() <= 3:
            return not _rational_roots(f)
        raise


@dataclass(frozen=True)
class AlgebraicNumber:
    """Element ``residue(alpha)`` of ``Q(alpha)`` where ``minpoly(alpha) = 0``."""

    minpoly: tuple
    residue: tuple = (0, 1)

    def __post_init__(self):
        f = fmpz_poly(list(self.minpoly))
        if f[f.degree()] != 1:
            raise ValueError("minimal polynomial must be monic")
        if not is_irreducible(f):
            raise ValueError("minimal polynomial is reducible")
        if len(self.residue) > f.degree():
            raise ValueError("residue degree must be below the field degree")

    @property
    def degree(self):
        return len(self.minpoly) - 1

    def charpoly(self):
        """Characteristic polynomial of multiplication by this element."""
        f = list(self.minpoly)
        n = len(f) - 1
        basis_mul = []
        res = [Fraction(x) for x in self.residue] + [Fraction(0)] * (n - len(self.residue))
        # row i: coordinates of alpha^i * x
        cur = res
        for _ in range(n):
            basis_mul.append(cur)
            nxt = [Fraction(0)] + cur[:-1]
            top = cur[-1]
            nxt = [x - top * f[i] for i, x in enumerate(nxt)]
            cur = nxt
        cp = linalg.charpoly(basis_mul)
        return cp

    def norm(self):
        cp = self.charpoly()
        return cp[0] * (-1) ** self.degree


def norm_and_resultant(f, g):
    """``Res(f, g)`` for monic integer polynomials.

    When ``f`` is the minimal polynomial of ``x`` this is
    ``prod_{f(x)=0} g(x) = (-1)^(deg f deg g) N(...)``, a norm of ``g(x)``.
    """
    if isinstance(f, AlgebraicNumber):
        f = f.minpoly
    f = fmpz_poly(list(f)) if not isinstance(f, fmpz_poly) else f
    g = fmpz_poly(list(g)) if not isinstance(g, fmpz_poly) else g
    if f[f.degree()] != 1 or g[g.degree()] != 1:
        raise ValueError("resultant inputs must be monic")
    return int(f.resultant(g))


def sylvester_resultant(f, g):
    """Resultant as the determinant of the Sylvester matrix (reference implementation)."""
    f = [Fraction(int(c)) for c in reversed(list(fmpz_poly(list(f)).coeffs()))]
    g = [Fraction(int(c)) for c in reversed(list(fmpz_poly(list(g)).coeffs()))]
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + f + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + g + [Fraction(0)] * (size - n - 1 - i))
    det = linalg.determinant(rows)
    return int(det)
