"""Truncated Fourier expansions of degree-2 Siegel modular forms.

A term ``Q1^a Q2^b R^c`` (``Q_i = exp(pi i tau_i)``, ``R = exp(pi i tau_12)``)
is stored under the integer key ``(a, b, c)``; the support of a holomorphic
form satisfies ``c^2 <= 4ab``.  Precision ``N`` bounds the total degree
``a + b``.

Internally an expansion is a single integer polynomial in one variable ``X``
together with a positive denominator.  The key ``(a, b, c)`` is sent to the
exponent ``t*S + a*W + (c + t)`` with ``t = a + b``.  Since ``|c| <= t`` on
the support, the digits never overlap and the map is additive, so series
multiplication becomes a truncated product of univariate polynomials.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from flint import ctx, fmpq_series, fmpz_poly


class FourierError(ValueError):
    pass


class CharacterMismatch(FourierError):
    pass


class NotDivisible(FourierError):
    """The dividend is not a multiple of the divisor within precision."""


class AllZero(FourierError):
    """Every diagonal derivative up to the search bound vanishes."""


class PrecisionError(FourierError):
    pass


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(int(x)) if not isinstance(x, float) else Fraction(x)


def _lcm(a, b):
    return a // gcd(a, b) * b


class Layout:
    """Digit layout of the packed representation at precision ``N``."""

    __slots__ = ("prec", "W", "S", "length")

    def __init__(self, prec, slack=0):
        self.prec = prec
        self.W = 2 * prec + 1 + slack
        self.S = (prec + 1) * self.W
        self.length = (prec + 1) * self.S

    def encode(self, a, b, c):
        t = a + b
        return t * self.S + a * self.W + c + t

    def decode(self, e):
        t, rem = divmod(e, self.S)
        a, cp = divmod(rem, self.W)
        return a, t - a, cp - t

    def valid(self, e):
        t, rem = divmod(e, self.S)
        a, cp = divmod(rem, self.W)
        if a > t or cp > 2 * t:
            return False
        b, c = t - a, cp - t
        return c * c <= 4 * a * b


@lru_cache(maxsize=None)
def layout(prec):
    return Layout(prec)


def _relayout(coeffs, src, dst, tmax):
    """Copy packed coefficients between layouts, one ``(t, a)`` block at a time.

    Only the digits ``0 <= a <= t <= tmax`` and ``0 <= c + t <= 2t`` are copied.
    """
    arr = [0] * ((tmax + 1) * dst.S)
    n = len(coeffs)
    for t in range(tmax + 1):
        for a in range(t + 1):
            i = t * src.S + a * src.W
            if i >= n:
                break
            j = t * dst.S + a * dst.W
            block = coeffs[i:i + 2 * t + 1]
            arr[j:j + len(block)] = block
    return fmpz_poly(arr)


def psd_key(a, b, c):
    return a >= 0 and b >= 0 and c * c <= 4 * a * b


class SiegelExpansion:
    """Truncated Fourier expansion with exact rational coefficients.

    Construct from a mapping ``{(a, b, c): coefficient}``; keys beyond the
    precision are dropped.  Instances are immutable.
    """

    __slots__ = ("prec", "character", "_poly", "_den", "_coeffs")

    def __init__(self, prec, coeffs=None, character=0):
        if prec < 0:
            raise PrecisionError("precision must be non-negative")
        self.prec = int(prec)
        self.character = int(character) & 1
        self._coeffs = None
        lay = layout(self.prec)
        items = []
        den = 1
        for (a, b, c), v in (coeffs or {}).items():
            if a + b > self.prec:
                continue
            if not psd_key(a, b, c):
                raise FourierError(f"key {(a, b, c)} violates c^2 <= 4ab")
            v = _frac(v)
            if v:
                items.append((lay.encode(a, b, c), v))
                den = _lcm(den, v.denominator)
        arr = [0] * (max((e for e, _ in items), default=-1) + 1)
        for e, v in items:
            arr[e] += v.numerator * (den // v.denominator)
        self._poly = fmpz_poly(arr)
        self._den = den
        self._normalize()

    @classmethod
    def _from_packed(cls, prec, poly, den=1, character=0):
        obj = cls.__new__(cls)
        obj.prec = prec
        obj.character = character & 1
        obj._coeffs = None
        obj._poly = poly
        obj._den = int(den)
        obj._normalize()
        return obj

    def _normalize(self):
        if self._den < 0:
            self._poly, self._den = -self._poly, -self._den
        if self._poly == 0:
            self._den = 1
        elif self._den != 1:
            g = gcd(int(self._poly.content()), self._den)
            if g > 1:
                self._poly = self._poly // g
                self._den //= g

    # -- access -------------------------------------------------------------

    @property
    def coeffs(self):
        """Dictionary ``{(a, b, c): Fraction}`` of the nonzero coefficients."""
        if self._coeffs is None:
            lay = layout(self.prec)
            d = self._den
            out = {}
            for e, v in enumerate(self._poly.coeffs()):
                if v:
                    out[lay.decode(e)] = Fraction(int(v), d)
            self._coeffs = out
        return self._coeffs

    def __getitem__(self, key):
        a, b, c = key
        if a + b > self.prec:
            raise PrecisionError(f"{key} beyond precision {self.prec}")
        if not psd_key(a, b, c):
            return Fraction(0)
        return Fraction(int(self._poly[layout(self.prec).encode(a, b, c)]), self._den)

    def slot(self, a, b):
        """Coefficients of ``Q1^a Q2^b`` as a dict ``{c: Fraction}``."""
        if a + b > self.prec:
            raise PrecisionError(f"slot {(a, b)} beyond precision {self.prec}")
        lay = layout(self.prec)
        bound = isqrt(4 * a * b)
        out = {}
        for c in range(-bound, bound + 1):
            v = self._poly[lay.encode(a, b, c)]
            if v:
                out[c] = Fraction(int(v), self._den)
        return out

    def is_zero(self):
        return self._poly == 0

    def __bool__(self):
        return not self.is_zero()

    def __len__(self):
        return len(self.coeffs)

    def integral(self):
        return self._den == 1

    @property
    def denominator(self):
        return self._den

    def check_support(self):
        """Raise unless every stored key lies in the cone ``c^2 <= 4ab``."""
        lay = layout(self.prec)
        for e, v in enumerate(self._poly.coeffs()):
            if v and not lay.valid(e):
                raise FourierError(f"stored key {lay.decode(e)} violates PSD support")
        return True

    def __repr__(self):
        terms = sorted(self.coeffs.items())[:6]
        body = " + ".join(f"({v})Q1^{a}Q2^{b}R^{c}" for (a, b, c), v in terms)
        more = " + ..." if len(self.coeffs) > 6 else ""
        return f"SiegelExpansion(prec={self.prec}, char={self.character}: {body or '0'}{more})"

    # -- precision ----------------------------------------------------------

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        if prec < 0:
            raise PrecisionError("precision must be non-negative")
        poly = _relayout(self._poly.coeffs(), layout(self.prec), layout(prec), prec)
        return SiegelExpansion._from_packed(prec, poly, self._den, self.character)

    def _packed_at(self, prec):
        return self.truncate(prec)._poly if prec < self.prec else self._poly

    # -- arithmetic ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, SiegelExpansion):
            n = min(self.prec, other.prec)
            if self.is_zero() and other.is_zero():
                return True
            if self.character != other.character:
                return False
            return (self._packed_at(n) * other._den == other._packed_at(n) * self._den)
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.prec, self.character, str(self._poly), self._den))

    def __neg__(self):
        return SiegelExpansion._from_packed(self.prec, -self._poly, self._den, self.character)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, -other)

    def __mul__(self, other):
        if isinstance(other, SiegelExpansion):
            return mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, x):
        x = _frac(x)
        return SiegelExpansion._from_packed(
            self.prec, self._poly * x.numerator, self._den * x.denominator, self.character)

    def swap(self):
        """Exchange ``tau_1`` and ``tau_2``: key ``(a, b, c)`` goes to ``(b, a, c)``."""
        return SiegelExpansion(self.prec, {(b, a, c): v for (a, b, c), v in self.coeffs.items()},
                               self.character)

    def reflect(self):
        """``tau_12 -> -tau_12``: key ``(a, b, c)`` goes to ``(a, b, -c)``."""
        return SiegelExpansion(self.prec, {(a, b, -c): v for (a, b, c), v in self.coeffs.items()},
                               self.character)

    # -- serialization ------------------------------------------------------

    def to_dict(self):
        return {
            "prec": self.prec,
            "character": self.character,
            "coeffs": [[a, b, c, f"{v.numerator}/{v.denominator}"]
                       for (a, b, c), v in sorted(self.coeffs.items())],
        }

    @classmethod
    def from_dict(cls, data):
        coeffs = {(int(a), int(b), int(c)): Fraction(v) for a, b, c, v in data["coeffs"]}
        return cls(int(data["prec"]), coeffs, int(data.get("character", 0)))

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def one(prec, character=0):
    return SiegelExpansion(prec, {(0, 0, 0): 1}, character)


def zero(prec, character=0):
    return SiegelExpansion(prec, {}, character)


def add(f, g):
    if f.character != g.character and not (f.is_zero() or g.is_zero()):
        raise CharacterMismatch("cannot add expansions with different characters")
    n = min(f.prec, g.prec)
    ch = f.character if not f.is_zero() else g.character
    den = _lcm(f._den, g._den)
    poly = f._packed_at(n) * (den // f._den) + g._packed_at(n) * (den // g._den)
    return SiegelExpansion._from_packed(n, poly, den, ch)


def linear_combination(coeffs, forms):
    """``sum(c_i * f_i)`` over a shared precision, with one pass of packing."""
    forms = list(forms)
    coeffs = [_frac(c) for c in coeffs]
    n = min(f.prec for f in forms)
    ch = None
    den = 1
    for c, f in zip(coeffs, forms):
        if c and not f.is_zero():
            if ch is None:
                ch = f.character
            elif ch != f.character:
                raise CharacterMismatch("mixed characters in linear combination")
            den = _lcm(den, c.denominator * f._den)
    poly = fmpz_poly()
    for c, f in zip(coeffs, forms):
        if c and not f.is_zero():
            poly += f._packed_at(n) * (c.numerator * (den // (c.denominator * f._den)))
    return SiegelExpansion._from_packed(n, poly, den, ch or 0)


def mul(f, g):
    """Truncated product; precision is the smaller of the two."""
    n = min(f.prec, g.prec)
    lay = layout(n)
    poly = f._packed_at(n).mul_low(g._packed_at(n), lay.length)
    return SiegelExpansion._from_packed(n, poly, f._den * g._den, f.character ^ g.character)


def power(f, e):
    result = one(f.prec)
    base = f
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def _inverse_unit_series(poly, length):
    """Inverse of an integer series with constant term +-1, modulo ``X^length``."""
    c0 = int(poly[0])
    if c0 not in (1, -1):
        return None
    inv = fmpz_poly([c0])
    k = 1
    while k < length:
        k = min(2 * k, length)
        e = poly.mul_low(inv, k)
        inv = inv.mul_low(2 - e, k)
    return inv


def leading_term(g):
    """Lowest packed key of ``g``: minimal total degree, then ``a``, then ``c``."""
    lay = layout(g.prec)
    coeffs = g._poly.coeffs()
    for e, v in enumerate(coeffs):
        if v:
            return lay.decode(e), Fraction(int(v), g._den)
    raise ZeroDivisionError("division by a zero expansion")


class _Divisor:
    """A divisor prepared once for repeated exact division at precision ``nf``."""

    def __init__(self, g, nf):
        (a0, b0, c0), _ = leading_term(g)
        self.g = g
        self.t0 = a0 + b0
        self.nf = nf
        self.nh = nf - self.t0
        if self.nh < 0:
            raise PrecisionError("dividend precision below the divisor's leading degree")
        self.lay = layout(nf)
        self.e0 = self.lay.encode(a0, b0, c0)
        self.length = self.lay.length - self.e0
        self.gp = g._packed_at(nf)
        gs = self.gp.right_shift(self.e0)
        self.inv = _inverse_unit_series(gs, self.length)
        self.qinv = None
        if self.inv is None:
            # flint truncates series at ctx.cap regardless of the requested precision
            cap = ctx.cap
            ctx.cap = max(cap, self.length)
            try:
                self.qinv = 1 / fmpq_series(gs.coeffs(), prec=self.length)
            finally:
                ctx.cap = cap

    def quotient(self, fs):
        """Packed ``fs / gs`` as ``(integer poly, denominator)``."""
        if self.inv is not None:
            return fs.mul_low(self.inv, self.length), 1
        cap = ctx.cap
        ctx.cap = max(cap, self.length)
        try:
            qs = fmpq_series(fs.coeffs(), prec=self.length) * self.qinv
        finally:
            ctx.cap = cap
        qcoeffs = [Fraction(int(x.p), int(x.q)) for x in qs.coeffs()]
        qden = 1
        for x in qcoeffs:
            qden = _lcm(qden, x.denominator)
        return fmpz_poly([int(x * qden) for x in qcoeffs]), qden

    def divide(self, f):
        if f.prec < self.nf:
            raise PrecisionError("dividend precision below the prepared divisor's")
        g, lay = self.g, self.lay
        fp = f._packed_at(self.nf)
        if fp == 0:
            return zero(self.nh, f.character ^ g.character)
        fcoeffs = fp.coeffs()
        if any(fcoeffs[:self.e0]):
            raise NotDivisible("dividend has terms below the divisor's leading term")
        q, qden = self.quotient(fp.right_shift(self.e0))
        # keep only the digits of keys of total degree <= nh in the quotient's own layout
        num = _relayout(q.coeffs(), lay, layout(self.nh), self.nh)
        h = SiegelExpansion._from_packed(self.nh, num * g._den, f._den * qden,
                                         f.character ^ g.character)
        # multiply back at the dividend precision; terms of h beyond nh cannot reach it
        back = _repack(h, self.nf).mul_low(self.gp, lay.length)
        if back * f._den != fp * (h._den * g._den):
            raise NotDivisible("quotient does not reproduce the dividend")
        return h


def divide_exact(f, g):
    """Return ``h`` with ``h * g == f``; the precision drops by the leading degree of ``g``.

    Raises :class:`NotDivisible` when no such ``h`` exists within precision.
    """
    return _Divisor(g, min(f.prec, g.prec)).divide(f)


def _repack(f, prec):
    """Packed polynomial of ``f`` in the layout of a larger precision ``prec``."""
    if prec == f.prec:
        return f._poly
    return _relayout(f._poly.coeffs(), layout(f.prec), layout(prec), f.prec)


# ---------------------------------------------------------------------------
# restriction to the diagonal tau_12 = 0


class PairSeries:
    """Expansion on H_1 x H_1: ``{(a, b): coefficient}`` with ``a + b <= prec``.

    Exponents are in ``Q``-units per factor (``Q = q^(1/2)``).
    """

    __slots__ = ("prec", "coeffs")

    def __init__(self, prec, coeffs=None):
        self.prec = int(prec)
        self.coeffs = {(int(a), int(b)): _frac(v) for (a, b), v in (coeffs or {}).items()
                       if a + b <= prec and v}

    def __getitem__(self, key):
        return self.coeffs.get(tuple(key), Fraction(0))

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def truncate(self, prec):
        return PairSeries(min(prec, self.prec), self.coeffs)

    def __eq__(self, other):
        if isinstance(other, PairSeries):
            n = min(self.prec, other.prec)
            return self.truncate(n).coeffs == other.truncate(n).coeffs
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __add__(self, other):
        n = min(self.prec, other.prec)
        out = dict(self.truncate(n).coeffs)
        for k, v in other.coeffs.items():
            if k[0] + k[1] <= n:
                out[k] = out.get(k, 0) + v
        return PairSeries(n, out)

    def __neg__(self):
        return PairSeries(self.prec, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, x):
        x = _frac(x)
        return PairSeries(self.prec, {k: v * x for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, PairSeries):
            return self.scale(other)
        n = min(self.prec, other.prec)
        out = {}
        for (a1, b1), v1 in self.coeffs.items():
            for (a2, b2), v2 in other.coeffs.items():
                if a1 + a2 + b1 + b2 <= n:
                    k = (a1 + a2, b1 + b2)
                    out[k] = out.get(k, 0) + v1 * v2
        return PairSeries(n, out)

    __rmul__ = __mul__

    def leading(self):
        """Nonzero term of least total degree (ties broken by ``a``)."""
        if not self.coeffs:
            return None
        k = min(self.coeffs, key=lambda ab: (ab[0] + ab[1], ab[0]))
        return k, self.coeffs[k]

    def swap(self):
        return PairSeries(self.prec, {(b, a): v for (a, b), v in self.coeffs.items()})

    def __repr__(self):
        terms = sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))[:6]
        body = " + ".join(f"({v})Q^{a}(x)Q^{b}" for (a, b), v in terms)
        return f"PairSeries(prec={self.prec}: {body or '0'})"

    def to_dict(self):
        return {"prec": self.prec,
                "coeffs": [[a, b, f"{v.numerator}/{v.denominator}"]
                           for (a, b), v in sorted(self.coeffs.items())]}


UNITS = ("s", "t")


def restrict_diagonal(f, m, unit="s"):
    """Raw ``m``-th derivative along ``tau_12`` at ``tau_12 = 0``.

    With unit ``s = pi i tau_12`` each ``R^c`` contributes ``c^m``; with
    ``t = 2 pi i tau_12`` it contributes ``(c/2)^m``.
    """
    if m < 0:
        raise ValueError("derivative order must be non-negative")
    if unit not in UNITS:
        raise ValueError(f"unit must be one of {UNITS}")
    out = {}
    lay = layout(f.prec)
    den = f._den
    coeffs = f._poly.coeffs()
    n = len(coeffs)
    for t in range(f.prec + 1):
        if t * lay.S >= n:
            break
        weights = [c ** m for c in range(-t, t + 1)]
        for a in range(t + 1):
            i = t * lay.S + a * lay.W
            block = coeffs[i:i + 2 * t + 1]
            if not any(block):
                continue
            v = sum(int(x) * w for x, w in zip(block, weights) if x)
            if v:
                out[(a, t - a)] = v
    scale = Fraction(1, den) if unit == "s" else Fraction(1, den * 2 ** m)
    return PairSeries(f.prec, {k: v * scale for k, v in out.items()})


# ---------------------------------------------------------------------------
# vector-valued expansions


class VectorExpansion:
    """Vector of ``j + 1`` expansions; entry ``i`` is the coordinate of ``X^(j-i) Y^i``."""

    __slots__ = ("j", "k", "character", "entries")

    def __init__(self, j, k, entries, character=None):
        entries = list(entries)
        if len(entries) != j + 1:
            raise FourierError(f"need {j + 1} entries for Sym^{j}, got {len(entries)}")
        n = min(e.prec for e in entries)
        entries = [e.truncate(n) for e in entries]
        if character is None:
            nz = [e.character for e in entries if not e.is_zero()]
            character = nz[0] if nz else 0
        for e in entries:
            if not e.is_zero() and e.character != character:
                raise CharacterMismatch("entries disagree on the character")
        self.j = j
        self.k = k
        self.character = character & 1
        self.entries = [e if not e.is_zero() else zero(n, character) for e in entries]

    @property
    def prec(self):
        return self.entries[0].prec

    @property
    def weight(self):
        return (self.j, self.k)

    def __getitem__(self, i):
        return self.entries[i]

    def __len__(self):
        return self.j + 1

    def is_zero(self):
        return all(e.is_zero() for e in self.entries)

    def truncate(self, prec):
        return VectorExpansion(self.j, self.k, [e.truncate(prec) for e in self.entries],
                               self.character)

    def __eq__(self, other):
        if not isinstance(other, VectorExpansion):
            return NotImplemented
        return (self.j == other.j and all(x == y for x, y in zip(self.entries, other.entries)))

    def __add__(self, other):
        return VectorExpansion(self.j, self.k, [x + y for x, y in zip(self.entries, other.entries)],
                               self.character)

    def __neg__(self):
        return VectorExpansion(self.j, self.k, [-x for x in self.entries], self.character)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, x):
        return VectorExpansion(self.j, self.k, [e.scale(x) for e in self.entries], self.character)

    def map_entries(self, fn, k=None, character=None):
        return VectorExpansion(self.j, self.k if k is None else k,
                               [fn(e) for e in self.entries],
                               self.character if character is None else character)

    def coefficient(self, a, b, c):
        return [e[(a, b, c)] for e in self.entries]

    def slot(self, a, b):
        return [e.slot(a, b) for e in self.entries]

    def restrict(self, m, unit="s"):
        return [restrict_diagonal(e, m, unit) for e in self.entries]

    def __repr__(self):
        return f"VectorExpansion(j={self.j}, k={self.k}, char={self.character}, prec={self.prec})"

    def to_dict(self):
        return {"j": self.j, "k": self.k, "prec": self.prec, "character": self.character,
                "entries": [e.to_dict() for e in self.entries]}

    @classmethod
    def from_dict(cls, data):
        return cls(int(data["j"]), int(data["k"]),
                   [SiegelExpansion.from_dict(e) for e in data["entries"]],
                   int(data.get("character", 0)))


def vector_linear_combination(coeffs, vectors):
    vectors = list(vectors)
    j, k = vectors[0].j, vectors[0].k
    entries = [linear_combination(coeffs, [v.entries[i] for v in vectors]) for i in range(j + 1)]
    chars = {v.character for c, v in zip(coeffs, vectors) if c}
    return VectorExpansion(j, k, entries, chars.pop() if len(chars) == 1 else vectors[0].character)


def vanishing_order(F, max_order=8, floor=12, strict=False):
    """Order of vanishing of ``F`` along ``tau_12 = 0``.

    A scalar :class:`SiegelExpansion` is treated as a vector of length one.
    With ``strict`` set, precision below ``floor`` raises instead of merely
    being unreliable.
    """
    entries = F.entries if isinstance(F, VectorExpansion) else [F]
    if strict and entries[0].prec < floor:
        raise PrecisionError(f"precision {entries[0].prec} below reliability floor {floor}")
    for m in range(max_order + 1):
        if any(restrict_diagonal(e, m, "s") for e in entries):
            return m
    raise AllZero(f"all diagonal derivatives up to order {max_order} vanish")


def vv_multiply(F, G):
    """Product through ``Sym^j1 (x) Sym^j2 -> Sym^(j1+j2)`` (multiply the polynomials in X, Y)."""
    if isinstance(F, SiegelExpansion):
        F = VectorExpansion(0, 0, [F])
    if isinstance(G, SiegelExpansion):
        G = VectorExpansion(0, 0, [G])
    j = F.j + G.j
    out = [None] * (j + 1)
    for i, fi in enumerate(F.entries):
        if fi.is_zero():
            continue
        for l, gl in enumerate(G.entries):
            if gl.is_zero():
                continue
            term = mul(fi, gl)
            out[i + l] = term if out[i + l] is None else out[i + l] + term
    n = min(F.prec, G.prec)
    ch = F.character ^ G.character
    out = [e if e is not None else zero(n, ch) for e in out]
    return VectorExpansion(j, F.k + G.k, out, ch)


def vv_divide(F, g):
    """Divide every entry of ``F`` by the scalar expansion ``g``."""
    div = _Divisor(g, min(F.prec, g.prec))
    entries = [div.divide(e) if not e.is_zero() else zero(div.nh) for e in F.entries]
    return VectorExpansion(F.j, F.k, entries, F.character ^ g.character)
