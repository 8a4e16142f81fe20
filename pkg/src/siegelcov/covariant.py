"""Covariants of binary sextics by weight-space linear algebra.

The sextic is ``f = sum a_i binom(6, i) x1^(6-i) x2^i``.  On polynomials in
``a_0..a_6`` the raising and lowering operators

    E = sum_{j=1}^{6} j a_{j-1} d/da_j,      F = sum_{j=0}^{5} (6-j) a_{j+1} d/da_j

realize sl_2; ``a_i`` has weight ``6 - 2i``.  A covariant of type
``A[lambda1, lambda2]`` in degree ``d`` is determined by a highest-weight
vector (kernel of ``E``) of weight ``p = lambda1 - lambda2``; its coordinate
at ``x1^(p-k) x2^k`` is ``F^k(v)/k!``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from . import linalg

NVARS = 7


class CovariantError(ValueError):
    pass


def _weight(mono):
    return sum((6 - 2 * i) * e for i, e in enumerate(mono))


class APoly:
    """Polynomial in ``a_0..a_6``: ``{exponent tuple: Fraction}``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for m, v in (terms or {}).items():
            v = Fraction(v)
            if v:
                m = tuple(m)
                if len(m) != NVARS:
                    raise CovariantError("exponent vectors have length 7")
                self.terms[m] = self.terms.get(m, 0) + v
        self.terms = {m: v for m, v in self.terms.items() if v}

    @classmethod
    def var(cls, i):
        m = [0] * NVARS
        m[i] = 1
        return cls({tuple(m): 1})

    @classmethod
    def parse(cls, text):
        """Parse sums like ``"a0*a6 - 6*a1*a5 + 15*a2*a4 - 10*a3^2"``."""
        import re
        text = text.replace(" ", "").replace("**", "^")
        if text and text[0] not in "+-":
            text = "+" + text
        terms = {}
        for sign, body in re.findall(r"([+-])([^+-]+)", text):
            coeff = Fraction(1)
            mono = [0] * NVARS
            for factor in body.split("*"):
                m = re.fullmatch(r"a(\d)(?:\^(\d+))?", factor)
                if m:
                    mono[int(m.group(1))] += int(m.group(2) or 1)
                else:
                    coeff *= Fraction(factor)
            mono = tuple(mono)
            terms[mono] = terms.get(mono, 0) + (coeff if sign == "+" else -coeff)
        return cls(terms)

    @property
    def degree(self):
        degs = {sum(m) for m in self.terms}
        if len(degs) > 1:
            raise CovariantError("polynomial is not homogeneous")
        return degs.pop() if degs else 0

    @property
    def sl2Weight(self):
        ws = {_weight(m) for m in self.terms}
        if len(ws) > 1:
            raise CovariantError("polynomial is not weight-homogeneous")
        return ws.pop() if ws else 0

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, APoly):
            return self.terms == other.terms
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for m, v in other.terms.items():
            out[m] = out.get(m, 0) + v
        return APoly(out)

    def __neg__(self):
        return APoly({m: -v for m, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, APoly):
            x = Fraction(other)
            return APoly({m: v * x for m, v in self.terms.items()})
        out = {}
        for m1, v1 in self.terms.items():
            for m2, v2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                out[m] = out.get(m, 0) + v1 * v2
        return APoly(out)

    __rmul__ = __mul__

    def monomials(self):
        return sorted(self.terms, reverse=True)

    def proportional_to(self, other):
        """Return ``c`` with ``self == c * other`` or ``None``."""
        if set(self.terms) != set(other.terms):
            return None
        if not self.terms:
            return Fraction(1)
        m = next(iter(self.terms))
        c = self.terms[m] / other.terms[m]
        return c if all(self.terms[k] == c * other.terms[k] for k in self.terms) else None

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in self.monomials():
            v = self.terms[m]
            mono = "*".join(f"a{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e)
            parts.append(f"{'+' if v > 0 else '-'} {abs(v)}*{mono or '1'}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else s


def raising(p):
    """``E = sum_{j=1}^{6} j a_{j-1} d/da_j``; raises the weight by 2."""
    out = {}
    for m, v in p.terms.items():
        for j in range(1, NVARS):
            e = m[j]
            if e:
                n = list(m)
                n[j] -= 1
                n[j - 1] += 1
                n = tuple(n)
                out[n] = out.get(n, 0) + v * j * e
    return APoly(out)


def lowering(p):
    """``F = sum_{j=0}^{5} (6-j) a_{j+1} d/da_j``; lowers the weight by 2."""
    out = {}
    for m, v in p.terms.items():
        for j in range(NVARS - 1):
            e = m[j]
            if e:
                n = list(m)
                n[j] -= 1
                n[j + 1] += 1
                n = tuple(n)
                out[n] = out.get(n, 0) + v * (6 - j) * e
    return APoly(out)


# ---------------------------------------------------------------------------
# weight spaces


@lru_cache(maxsize=None)
def _monomials(d):
    out = []

    def rec(i, left, acc):
        if i == NVARS - 1:
            out.append(tuple(acc + [left]))
            return
        for e in range(left, -1, -1):
            rec(i + 1, left - e, acc + [e])

    rec(0, d, [])
    return tuple(out)


@lru_cache(maxsize=None)
def weight_space(d, w):
    """Degree-``d`` monomials of sl2-weight ``w`` in descending lexicographic order."""
    return tuple(sorted((m for m in _monomials(d) if _weight(m) == w), reverse=True))


def weight_count(d, w):
    return len(weight_space(d, w))


def _check_lambda(d, lam):
    l1, l2 = lam
    if l1 + l2 != 6 * d:
        raise CovariantError(f"weight {lam} does not sum to 6d = {6 * d}")
    if l1 < l2 or l2 < 0:
        raise CovariantError(f"weight {lam} is not dominant")


def multiplicity(d, lam):
    """Multiplicity of ``A[lam]`` in ``Sym^d(Sym^6)``."""
    _check_lambda(d, lam)
    p = lam[0] - lam[1]
    return weight_count(d, p) - weight_count(d, p + 2)


def decomposition(d):
    """List of ``((lambda1, lambda2), multiplicity)`` with positive multiplicity."""
    out = []
    for l2 in range(3 * d + 1):
        lam = (6 * d - l2, l2)
        if lam[0] < lam[1]:
            break
        m = multiplicity(d, lam)
        if m:
            out.append((lam, m))
    return out


@lru_cache(maxsize=None)
def highest_weight_basis(d, lam):
    """Echelon basis of the kernel of ``raising`` on the degree-``d`` weight ``p`` space.

    Rows are reduced echelon in descending lexicographic monomial order, then
    scaled to primitive integer vectors with positive leading entry.
    """
    lam = tuple(lam)
    if multiplicity(d, lam) == 0:
        raise CovariantError(f"A{list(lam)} does not occur in degree {d}")
    p = lam[0] - lam[1]
    src = weight_space(d, p)
    dst = weight_space(d, p + 2)
    index = {m: i for i, m in enumerate(dst)}
    # matrix of raising: rows = target monomials, columns = source monomials
    rows = [[Fraction(0)] * len(src) for _ in dst]
    for j, m in enumerate(src):
        img = raising(APoly({m: 1}))
        for n, v in img.terms.items():
            rows[index[n]][j] = v
    if dst:
        kernel = linalg.nullspace(rows, ncols=len(src))
    else:
        kernel = [[Fraction(int(i == j)) for j in range(len(src))] for i in range(len(src))]
    basis = []
    for vec in kernel:
        den = 1
        for x in vec:
            den = den * x.denominator // _gcd(den, x.denominator)
        ints = [int(x * den) for x in vec]
        g = 0
        for x in ints:
            g = _gcd(g, abs(x))
        lead = next(x for x in ints if x)
        sign = 1 if lead > 0 else -1
        basis.append(APoly({m: Fraction(sign * x // g) for m, x in zip(src, ints) if x}))
    if len(basis) != multiplicity(d, lam):
        raise CovariantError("kernel dimension disagrees with the multiplicity count")
    return tuple(basis)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


@dataclass(frozen=True)
class CovariantPoly:
    """Covariant of type ``A[lambda]`` in degree ``d``; entry ``k`` is the coefficient of ``x1^(p-k) x2^k``."""

    d: int
    lam: tuple
    entries: tuple

    @property
    def p(self):
        return self.lam[0] - self.lam[1]

    @property
    def q(self):
        return self.lam[1]

    def __getitem__(self, k):
        return self.entries[k]

    def to_dict(self):
        return {
            "d": self.d,
            "lambda": list(self.lam),
            "entries": [[[list(m), f"{v.numerator}/{v.denominator}"]
                         for m, v in sorted(e.terms.items(), reverse=True)]
                        for e in self.entries],
        }

    @classmethod
    def from_dict(cls, data):
        entries = tuple(APoly({tuple(m): Fraction(v) for m, v in e}) for e in data["entries"])
        return cls(int(data["d"]), tuple(data["lambda"]), entries)


def covariant_from_hw(v):
    """Orbit ``F^k(v)/k!`` of a highest-weight vector."""
    if v.is_zero():
        raise CovariantError("zero vector")
    if raising(v):
        raise CovariantError("input is not a highest-weight vector")
    d, p = v.degree, v.sl2Weight
    entries = [v]
    cur = v
    for k in range(1, p + 1):
        cur = lowering(cur)
        entries.append(cur * Fraction(1, factorial(k)))
    return CovariantPoly(d, ((6 * d + p) // 2, (6 * d - p) // 2), tuple(entries))


def covariants(d, lam):
    """Covariants for each element of the highest-weight basis."""
    return [covariant_from_hw(v) for v in highest_weight_basis(d, tuple(lam))]


def tautological():
    return covariant_from_hw(APoly.var(0))


def check_binomial_dimension(d):
    """``sum mult * (p + 1) == binom(d + 6, 6)``."""
    total = sum(m * (lam[0] - lam[1] + 1) for lam, m in decomposition(d))
    return total == comb(d + 6, 6)


def covariant_product(h1, h2):
    """Product of covariants as polynomials in ``x1, x2`` (weights add)."""
    p = h1.p + h2.p
    entries = [APoly() for _ in range(p + 1)]
    for i, e1 in enumerate(h1.entries):
        for k, e2 in enumerate(h2.entries):
            entries[i + k] = entries[i + k] + e1 * e2
    d = h1.d + h2.d
    return CovariantPoly(d, ((6 * d + p) // 2, (6 * d - p) // 2), tuple(entries))
