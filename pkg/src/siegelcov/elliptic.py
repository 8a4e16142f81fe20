"""Elliptic (quasi-)modular forms as exact truncated q-expansions.

Exponents are stored in ``Q = q^(1/2)`` units so that ``delta`` (weight 6 on
Gamma_1(2), expansion in odd powers of ``Q``) lives in the same type as the
level-one forms.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from flint import fmpz_poly

from . import linalg
from .fourier import PairSeries, PrecisionError

LEVELS = ("SL2Z", "Gamma1(2)")


class EllipticSeries:
    """``{Q-exponent: Fraction}`` truncated at ``prec`` (exponents ``<= prec``)."""

    __slots__ = ("prec", "coeffs", "weight", "depth", "level")

    def __init__(self, prec, coeffs=None, weight=0, depth=0, level="SL2Z"):
        if level not in LEVELS:
            raise ValueError(f"unknown level {level!r}")
        self.prec = int(prec)
        self.coeffs = {int(n): Fraction(v) for n, v in (coeffs or {}).items()
                       if 0 <= n <= prec and v}
        self.weight = weight
        self.depth = depth
        self.level = level

    def __getitem__(self, n):
        if n > self.prec:
            raise PrecisionError(f"Q^{n} beyond precision {self.prec}")
        return self.coeffs.get(n, Fraction(0))

    def q_coeff(self, n):
        """Coefficient of ``q^n``."""
        return self[2 * n]

    def is_zero(self):
        return not self.coeffs

    def valuation(self):
        return min(self.coeffs) if self.coeffs else None

    def truncate(self, prec):
        return EllipticSeries(min(prec, self.prec), self.coeffs, self.weight, self.depth, self.level)

    def _combine_level(self, other):
        return "SL2Z" if self.level == other.level == "SL2Z" else "Gamma1(2)"

    def __add__(self, other):
        if not isinstance(other, EllipticSeries):
            other = constant(other, self.prec)
        n = min(self.prec, other.prec)
        out = dict(self.truncate(n).coeffs)
        for k, v in other.coeffs.items():
            if k <= n:
                out[k] = out.get(k, 0) + v
        return EllipticSeries(n, out, self.weight, max(self.depth, other.depth),
                              self._combine_level(other))

    __radd__ = __add__

    def __neg__(self):
        return EllipticSeries(self.prec, {k: -v for k, v in self.coeffs.items()},
                              self.weight, self.depth, self.level)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, EllipticSeries):
            x = Fraction(other)
            return EllipticSeries(self.prec, {k: v * x for k, v in self.coeffs.items()},
                                  self.weight, self.depth, self.level)
        n = min(self.prec, other.prec)
        out = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                if k1 + k2 <= n:
                    out[k1 + k2] = out.get(k1 + k2, 0) + v1 * v2
        return EllipticSeries(n, out, self.weight + other.weight, self.depth + other.depth,
                              self._combine_level(other))

    __rmul__ = __mul__

    def __pow__(self, e):
        result = constant(1, self.prec)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, EllipticSeries):
            n = min(self.prec, other.prec)
            return self.truncate(n).coeffs == other.truncate(n).coeffs
        return NotImplemented

    def tensor(self, other):
        """``self(tau_1) * other(tau_2)`` as a :class:`PairSeries`."""
        n = min(self.prec, other.prec)
        out = {}
        for a, u in self.coeffs.items():
            for b, v in other.coeffs.items():
                if a + b <= n:
                    out[(a, b)] = u * v
        return PairSeries(n, out)

    def __repr__(self):
        terms = sorted(self.coeffs.items())[:6]
        body = " + ".join(f"({v})Q^{k}" for k, v in terms)
        return f"EllipticSeries(k={self.weight}, depth={self.depth}, {self.level}: {body or '0'})"


def constant(c, prec):
    return EllipticSeries(prec, {0: Fraction(c)})


@lru_cache(maxsize=None)
def bernoulli(n):
    """Bernoulli number ``B_n`` with ``B_1 = -1/2``."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(comb(m + 1, k) * B[k] for k in range(m)) / Fraction(m + 1))
    return B[n]


def sigma(n, r):
    return sum(d ** r for d in range(1, n + 1) if n % d == 0)


@lru_cache(maxsize=None)
def eisenstein(k, N):
    """Normalized Eisenstein series ``e_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n``."""
    if k % 2 or k < 2:
        raise ValueError("Eisenstein series need even weight k >= 2")
    c = Fraction(-2 * k) / bernoulli(k)
    coeffs = {0: Fraction(1)}
    for n in range(1, N // 2 + 1):
        coeffs[2 * n] = c * sigma(n, k - 1)
    return EllipticSeries(N, coeffs, weight=k, depth=1 if k == 2 else 0)


def _eta_power_product(power, N):
    """Coefficients of ``prod (1 - q^n)^power`` in q-units up to ``q^M``."""
    M = N // 2
    p = fmpz_poly([1])
    for n in range(1, M + 1):
        p = p.mul_low(fmpz_poly([1] + [0] * (n - 1) + [-1]) ** power, M + 1)
    return [int(x) for x in p.coeffs()] + [0] * (M + 1 - len(p.coeffs()))


@lru_cache(maxsize=None)
def delta(N):
    """``Delta = q prod (1 - q^n)^24``."""
    c = _eta_power_product(24, N)
    coeffs = {2 * (n + 1): v for n, v in enumerate(c) if 2 * (n + 1) <= N}
    return EllipticSeries(N, coeffs, weight=12)


@lru_cache(maxsize=None)
def little_delta(N):
    """``delta = q^(1/2) prod (1 - q^n)^12``, a form of weight 6 on Gamma_1(2)."""
    c = _eta_power_product(12, N + 1)
    coeffs = {2 * n + 1: v for n, v in enumerate(c) if 2 * n + 1 <= N}
    return EllipticSeries(N, coeffs, weight=6, level="Gamma1(2)")


def D_op(f):
    """``D = q d/dq``: the ``Q^m`` coefficient is multiplied by ``m/2``."""
    return EllipticSeries(f.prec, {m: v * Fraction(m, 2) for m, v in f.coeffs.items()},
                          f.weight + 2, f.depth + 1, f.level)


# ---------------------------------------------------------------------------
# bases


def modular_monomials(k):
    """Exponents ``(a, b)`` with ``4a + 6b = k``."""
    return [(a, (k - 4 * a) // 6) for a in range(k // 4 + 1) if (k - 4 * a) % 6 == 0]


def modular_basis(k, N, level="SL2Z"):
    """Spanning list of ``M_k``: monomials in ``e_4, e_6`` (SL2Z) or in ``e_2^(2), delta`` (level 2)."""
    if k < 0 or k % 2:
        return []
    if k == 0:
        return [constant(1, N)]
    if level == "SL2Z":
        e4, e6 = eisenstein(4, N), eisenstein(6, N)
        out = []
        for a, b in modular_monomials(k):
            f = e4 ** a * e6 ** b
            out.append(EllipticSeries(N, f.coeffs, weight=k))
        return out
    # M_*(Gamma_0(2)) = C[F2, e4] with F2 = 2 e2(2 tau) - e2(tau); used for Gamma_1(2)
    e2 = eisenstein(2, N)
    f2 = EllipticSeries(N, {2 * m: 2 * v for m, v in e2.coeffs.items() if 2 * m <= N}) - e2
    e4 = eisenstein(4, N)
    out = []
    for a in range(k // 4 + 1):
        rest = k - 4 * a
        f = e4 ** a * f2 ** (rest // 2)
        out.append(EllipticSeries(N, f.coeffs, weight=k, level=level))
    return out


def quasi_basis(k, N=20, level="SL2Z"):
    """Spanning set of quasi-modular forms of weight ``k``.

    The derivatives ``D^i M_(k-2i)`` together with ``D^(k/2-1) e_2``.
    """
    if k % 2 or k <= 0:
        return []
    out = []
    for i in range(k // 2 + 1):
        for f in modular_basis(k - 2 * i, N, level):
            g = f
            for _ in range(i):
                g = D_op(g)
            if not g.is_zero():
                out.append(EllipticSeries(N, g.coeffs, weight=k, depth=i, level=level))
    g = eisenstein(2, N)
    for _ in range(k // 2 - 1):
        g = D_op(g)
    out.append(EllipticSeries(N, g.coeffs, weight=k, depth=k // 2, level=level))
    return out


def quasi_monomials(k, N):
    """Basis of quasi-modular forms of weight ``k`` on SL2Z: ``e2^a e4^b e6^c``."""
    out = []
    e2, e4, e6 = eisenstein(2, N), eisenstein(4, N), eisenstein(6, N)
    for a in range(k // 2 + 1):
        for b, c in modular_monomials(k - 2 * a):
            f = e2 ** a * e4 ** b * e6 ** c
            out.append(EllipticSeries(N, f.coeffs, weight=k, depth=a))
    return out


def echelon(series, N):
    """Row-reduce a list of series on the coefficients ``Q^0..Q^N``; drops dependent rows."""
    rows = [[s[n] for n in range(N + 1)] for s in series]
    if not rows:
        return []
    R, _ = linalg.rref(rows)
    return [EllipticSeries(N, dict(enumerate(r)), weight=series[0].weight, level=series[0].level)
            for r in R]


def dim_cusp(k):
    if k < 12 or k % 2:
        return 0
    d = k // 12 + (0 if k % 12 == 2 else 1)
    return d - 1


def cusp_basis(k, N):
    """Miller-style basis of ``S_k(SL2Z)``: ``f_i = q^i + O(q^(d+1))``."""
    d = dim_cusp(k)
    if d == 0:
        return []
    Delta = delta(N)
    gens = [Delta * f for f in modular_basis(k - 12, N)]
    gens = [EllipticSeries(N, g.coeffs, weight=k) for g in gens]
    # echelonize on q-coefficients (even Q-exponents)
    rows = [[g.q_coeff(n) for n in range(1, N // 2 + 1)] for g in gens]
    R, _ = linalg.rref(rows)
    if len(R) != d:
        raise PrecisionError(f"precision {N} too low to separate S_{k}")
    return [EllipticSeries(N, {2 * (n + 1): x for n, x in enumerate(r)}, weight=k) for r in R]


def _hecke_image(f, p, k, nmax):
    """``q``-coefficients ``1..nmax`` of ``T_p f``: ``a(np) + p^(k-1) a(n/p)``."""
    out = []
    for n in range(1, nmax + 1):
        v = f.q_coeff(n * p)
        if n % p == 0:
            v += p ** (k - 1) * f.q_coeff(n // p)
        out.append(v)
    return out


def elliptic_hecke(k, p, N=None):
    """Matrix of ``T_p`` on ``S_k(SL2Z)`` in the echelon basis.

    Row ``i`` holds the coordinates of ``T_p f_i``.
    """
    d = dim_cusp(k)
    if N is None:
        N = 2 * (p * (d + 1) + 1)
    if N // 2 < p * (d + 1):
        raise PrecisionError(f"need at least q^{p * (d + 1)} for T_{p} on S_{k}")
    basis = cusp_basis(k, N)
    return [_hecke_image(f, p, k, d) for f in basis]


def charpoly_int(M):
    return linalg.charpoly_int(M)


def squarefree_part(n):
    n = abs(int(n))
    out = 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
        if n % p == 0:
            out *= p
            n //= p
        p += 1
    return out * n
