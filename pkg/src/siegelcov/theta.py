"""Genus-2 theta constants with characteristics and the seed forms built from them.

``chi5`` is the normalized product of the ten even theta constants and
``chi63`` the normalized sixth symmetric power of the gradients of the six
odd theta functions at ``z = 0``.

Lattice points are written ``v = 2n + 2m'`` so that the exponent of a term is
``(v1^2, v2^2, 2 v1 v2)`` in quarter units of ``(Q1, Q2, R)`` and the phase
``exp(2 pi i (n + m') . m'')`` equals ``i^(v . 2m'')``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt

from flint import fmpz_poly

from .fourier import (
    FourierError, Layout, SiegelExpansion, VectorExpansion, layout, mul, vv_multiply,
)


class ThetaError(FourierError):
    pass


@dataclass(frozen=True, order=True)
class ThetaCharacteristic:
    """Characteristic ``(m', m'')`` stored as numerator bits of halves."""

    mPrime: tuple
    mDoublePrime: tuple

    @property
    def parity(self):
        s, t = self.mPrime, self.mDoublePrime
        return (s[0] * t[0] + s[1] * t[1]) % 2

    @property
    def is_even(self):
        return self.parity == 0

    def __str__(self):
        return "[{}{};{}{}]".format(*self.mPrime, *self.mDoublePrime)


def characteristics():
    """All sixteen characteristics in lexicographic order of ``(m', m'')``."""
    bits = list(itertools.product((0, 1), repeat=2))
    return [ThetaCharacteristic(s, t) for s in bits for t in bits]


def even_characteristics():
    return [ch for ch in characteristics() if ch.is_even]


def odd_characteristics():
    return [ch for ch in characteristics() if not ch.is_even]


# ---------------------------------------------------------------------------
# quarter-unit expansions with Gaussian rational coefficients


def _gmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


_I_POWERS = ((1, 0), (0, 1), (-1, 0), (0, -1))


class QuarterExpansion:
    """Sparse expansion in ``exp(pi i tau / 4)`` units with Gaussian rational coefficients.

    ``coeffs`` maps ``(A, B, C)`` (quarter units of ``Q1, Q2, R``) to a pair
    ``(re, im)`` of Fractions.  ``prec`` is the total-degree bound in Q-units.
    """

    __slots__ = ("prec", "coeffs")

    def __init__(self, prec, coeffs=None):
        self.prec = prec
        self.coeffs = {}
        for key, (re, im) in (coeffs or {}).items():
            if key[0] + key[1] <= 4 * prec and (re or im):
                self.coeffs[key] = (Fraction(re), Fraction(im))

    def __getitem__(self, key):
        return self.coeffs.get(tuple(key), (Fraction(0), Fraction(0)))

    def __mul__(self, other):
        n = min(self.prec, other.prec)
        out = {}
        for (a1, b1, c1), x in self.coeffs.items():
            for (a2, b2, c2), y in other.coeffs.items():
                if a1 + a2 + b1 + b2 <= 4 * n:
                    k = (a1 + a2, b1 + b2, c1 + c2)
                    re, im = _gmul(x, y)
                    old = out.get(k, (0, 0))
                    out[k] = (old[0] + re, old[1] + im)
        return QuarterExpansion(n, out)

    def __add__(self, other):
        n = min(self.prec, other.prec)
        out = dict(QuarterExpansion(n, self.coeffs).coeffs)
        for k, (re, im) in other.coeffs.items():
            old = out.get(k, (0, 0))
            out[k] = (old[0] + re, old[1] + im)
        return QuarterExpansion(n, out)

    def scale(self, z):
        """Multiply by a Gaussian rational ``z = (re, im)``."""
        z = (Fraction(z[0]), Fraction(z[1]))
        return QuarterExpansion(self.prec, {k: _gmul(v, z) for k, v in self.coeffs.items()})

    def to_siegel(self, character=0):
        """Convert to Q-units; every exponent must be divisible by 4 and every coefficient real."""
        out = {}
        for (a, b, c), (re, im) in self.coeffs.items():
            if a % 4 or b % 4 or c % 4:
                raise ThetaError(f"exponent {(a, b, c)} is not integral in Q-units")
            if im:
                raise ThetaError(f"nonzero imaginary part at {(a, b, c)}")
            out[(a // 4, b // 4, c // 4)] = re
        return SiegelExpansion(self.prec, out, character)


def _lattice(s, prec):
    """Lattice vectors ``v = 2n + s`` with ``(v1^2 + v2^2)/4 <= prec``."""
    bound = isqrt(4 * prec) + 2
    for v1 in range(-bound, bound + 1):
        if (v1 - s[0]) % 2:
            continue
        for v2 in range(-bound, bound + 1):
            if (v2 - s[1]) % 2:
                continue
            if v1 * v1 + v2 * v2 <= 4 * prec:
                yield v1, v2


def even_theta_constant(ch, N):
    """Theta constant ``theta[m', m''](tau, 0)`` truncated at total Q-degree ``N``."""
    if not ch.is_even:
        raise ThetaError(f"characteristic {ch} is odd")
    s, t = ch.mPrime, ch.mDoublePrime
    out = {}
    for v1, v2 in _lattice(s, N):
        key = (v1 * v1, v2 * v2, 2 * v1 * v2)
        ph = _I_POWERS[(v1 * t[0] + v2 * t[1]) % 4]
        old = out.get(key, (0, 0))
        out[key] = (old[0] + ph[0], old[1] + ph[1])
    return QuarterExpansion(N, out)


def odd_theta_gradient(ch, N):
    """The two series ``sum (n + m')_j exp(...)`` for ``j = 1, 2`` (2 pi i dropped)."""
    if ch.is_even:
        raise ThetaError(f"characteristic {ch} is even")
    s, t = ch.mPrime, ch.mDoublePrime
    comps = ({}, {})
    for v1, v2 in _lattice(s, N):
        key = (v1 * v1, v2 * v2, 2 * v1 * v2)
        ph = _I_POWERS[(v1 * t[0] + v2 * t[1]) % 4]
        for j, w in enumerate((v1, v2)):
            x = Fraction(w, 2)
            old = comps[j].get(key, (0, 0))
            comps[j][key] = (old[0] + ph[0] * x, old[1] + ph[1] * x)
    return QuarterExpansion(N, comps[0]), QuarterExpansion(N, comps[1])


# ---------------------------------------------------------------------------
# fast products
#
# Each theta series factors as a fixed quarter-unit monomial times a series
# with integer exponents.  For the characteristic class ``s = 2m'`` the
# monomial is Q1^(s1/4) Q2^(s2/4) R^(-s1 s2 / 2); the remaining exponents
# satisfy 0 <= c + a + b <= 2(a + b) + s1 s2, so they pack into a layout with
# two units of slack (two factors with s = (1, 1) enter each product).

_SLACK = 2


def _shift(s):
    return (s[0], s[1], -2 * s[0] * s[1])


def _packed_terms(terms, s, lay):
    pa, pb, pc = _shift(s)
    arr = {}
    for (A, B, C), v in terms.items():
        a, b, c = (A - pa) // 4, (B - pb) // 4, (C - pc) // 4
        if a + b > lay.prec:
            continue
        e = lay.encode(a, b, c)
        arr[e] = arr.get(e, 0) + v
    out = [0] * (max(arr, default=-1) + 1)
    for e, v in arr.items():
        out[e] = v
    return fmpz_poly(out)


def _real_terms(ch, N, component=None):
    """Integer coefficients of a theta series after removing the common phase.

    Returns ``(terms, phase)`` with the series equal to ``i^phase * terms``.
    ``component`` selects ``v1`` or ``v2`` weights for odd gradients (times 2).
    """
    s, t = ch.mPrime, ch.mDoublePrime
    terms = {}
    phase = ch.parity  # odd characteristics carry a factor i
    for v1, v2 in _lattice(s, N):
        m = (v1 * t[0] + v2 * t[1]) % 4
        sign = 1 if (m - phase) % 4 == 0 else -1
        w = 1 if component is None else (v1, v2)[component]
        if w:
            key = (v1 * v1, v2 * v2, 2 * v1 * v2)
            terms[key] = terms.get(key, 0) + sign * w
    return terms, phase


def _total_shift(chars):
    pa = sum(_shift(ch.mPrime)[0] for ch in chars)
    pb = sum(_shift(ch.mPrime)[1] for ch in chars)
    pc = sum(_shift(ch.mPrime)[2] for ch in chars)
    if pa % 4 or pb % 4 or pc % 4:
        raise ThetaError("product of characteristics is not integral in Q-units")
    return pa // 4, pb // 4, pc // 4


def _unpack(poly, lay, shift, prec, scale=Fraction(1)):
    sa, sb, sc = shift
    out = {}
    for e, v in enumerate(poly.coeffs()):
        if v:
            t, rem = divmod(e, lay.S)
            a, cp = divmod(rem, lay.W)
            b, c = t - a, cp - t
            out[(a + sa, b + sb, c + sc)] = int(v) * scale
    return out


def _slack_layout(prec):
    return Layout(prec, slack=_SLACK)


def _product_tree(polys, lay):
    polys = list(polys)
    while len(polys) > 1:
        nxt = []
        for i in range(0, len(polys) - 1, 2):
            nxt.append(polys[i].mul_low(polys[i + 1], lay.length))
        if len(polys) % 2:
            nxt.append(polys[-1])
        polys = nxt
    return polys[0]


@lru_cache(maxsize=8)
def _raw_chi5(N):
    chars = even_characteristics()
    shift = _total_shift(chars)
    inner = N - shift[0] - shift[1]
    lay = _slack_layout(inner)
    polys = []
    for ch in chars:
        terms, _ = _real_terms(ch, N)
        polys.append(_packed_terms(terms, ch.mPrime, lay))
    prod = _product_tree(polys, lay)
    return _unpack(prod, lay, shift, N)


@lru_cache(maxsize=8)
def chi5(N):
    """Scalar form of weight 5 with character, normalized to ``(1/R - R) Q1 Q2 + ...``."""
    if N < 4:
        raise ThetaError("seed precision must be at least 4")
    raw = _raw_chi5(N)
    lead = raw.get((1, 1, -1), 0)
    if not lead or raw.get((1, 1, 1), 0) != -lead:
        raise ThetaError("theta product does not start with a multiple of (1/R - R) Q1 Q2")
    scale = Fraction(1, lead)
    f = SiegelExpansion(N, {k: v * scale for k, v in raw.items()}, character=1)
    if not f.integral():
        raise ThetaError("normalized chi5 has non-integral coefficients")
    return f


@lru_cache(maxsize=8)
def chi10(N):
    return mul(chi5(N), chi5(N))


def _poly_times_linear(poly_xy, lin, lay):
    """Multiply a polynomial in (X, Y) (list of packed series) by ``l1 X + l2 Y``."""
    out = [None] * (len(poly_xy) + 1)
    for i, p in enumerate(poly_xy):
        for j, l in enumerate(lin):
            term = p.mul_low(l, lay.length)
            out[i + j] = term if out[i + j] is None else out[i + j] + term
    return out


@lru_cache(maxsize=8)
def _raw_chi63(N):
    chars = odd_characteristics()
    shift = _total_shift(chars)
    inner = N - shift[0] - shift[1]
    lay = _slack_layout(inner)
    linear = []
    for ch in chars:
        comps = []
        for j in (0, 1):
            terms, _ = _real_terms(ch, N, component=j)
            comps.append(_packed_terms(terms, ch.mPrime, lay))
        linear.append(comps)
    poly = [fmpz_poly([1])]
    for lin in linear:
        poly = _poly_times_linear(poly, lin, lay)
    # six factors of i contribute i^6 = -1
    return [_unpack(-p, lay, shift, N) for p in poly]


@lru_cache(maxsize=8)
def chi63(N):
    """Vector-valued form of weight (6, 3) with character, normalized as in the seed table.

    Entry ``i`` is the coefficient of ``X^(6-i) Y^i`` in the product of the
    six gradient linear forms.
    """
    if N < 4:
        raise ThetaError("seed precision must be at least 4")
    raw = _raw_chi63(N)
    mid = raw[3].get((1, 1, 1), 0)
    if not mid:
        raise ThetaError("gradient product has no Q1 Q2 R term in the middle entry")
    scale = Fraction(2, mid)
    entries = [SiegelExpansion(N, {k: v * scale for k, v in r.items()}, character=1) for r in raw]
    target = [{}, {}, {1: 1, -1: -1}, {1: 2, -1: 2}, {1: 1, -1: -1}, {}, {}]
    for e, want in zip(entries, target):
        if e.slot(1, 1) != want:
            raise ThetaError("gradient product does not match the normalized leading vector")
        if not e.integral():
            raise ThetaError("normalized chi63 has non-integral coefficients")
    return VectorExpansion(6, 3, entries, character=1)


@lru_cache(maxsize=8)
def chi68(N):
    F = chi63(N)
    f = chi5(N)
    return VectorExpansion(6, 8, [mul(e, f) for e in F.entries], character=0)


def alphas(N):
    """The series ``alpha_i`` with ``chi63 = sum binom(6, i) alpha_i X^(6-i) Y^i``."""
    F = chi63(N)
    return [e.scale(Fraction(1, comb(6, i))) for i, e in enumerate(F.entries)]
