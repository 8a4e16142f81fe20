"""From covariants to vector-valued Siegel modular forms.

A covariant ``h`` of type ``A[lambda]`` in degree ``d`` becomes a form of
weight ``(p, q + 3d)`` by substituting the coefficient series ``alpha_i`` of
``chi_{6,3} = sum binom(6, i) alpha_i X^(6-i) Y^i`` for ``a_i``.  The image
vanishes along the diagonal to some order ``nu``; dividing by ``chi_5^nu``
gives a holomorphic form of weight ``(p, q + 3d - 5 nu)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd

from flint import fmpz_poly

from . import linalg
from .covariant import CovariantPoly, covariants, highest_weight_basis, multiplicity
from .fourier import (
    AllZero,
    PrecisionError,
    SiegelExpansion,
    VectorExpansion,
    layout,
    restrict_diagonal,
    vanishing_order,
    vector_linear_combination,
    vv_divide,
    zero,
)
from .linalg import InconsistentSystem, Underdetermined

PREC_FLOOR = 8


class NoMatch(ValueError):
    pass


class GammaEvaluator:
    """Evaluates covariants at the coefficient series of ``chi_{6,3}``.

    Every ``alpha_i`` is ``Q1 Q2 R`` times a series in ``Q1^2, Q2^2, R^2``, so
    products are packed on that index-8 sublattice: a key ``(a, b, c)`` with
    ``a, b, c`` odd is stored as ``((a-1)/2, (b-1)/2, (c-1)/2)``.  Monomials
    ``alpha^e`` are built one factor at a time and memoized, so a batch of
    covariants of one degree shares its products.  The stored series are the
    integral entries ``beta_i = binom(6, i) alpha_i``; the binomial factors
    are folded into the scalar coefficients.
    """

    def __init__(self, chi63, floor=PREC_FLOOR, max_degree=8):
        if chi63.j != 6:
            raise ValueError("expected a form of weight (6, *)")
        if chi63.prec < floor:
            raise PrecisionError(f"precision {chi63.prec} below the floor {floor}")
        self.chi63 = chi63
        self.prec = chi63.prec
        self.max_degree = max_degree
        self._layouts = {}
        self._beta = {}
        self._cache = {}
        self._entries = []
        for e in chi63.entries:
            if not e.integral():
                raise ValueError("chi_{6,3} entries must be integral")
            terms = {}
            for (a, b, c), v in e.coeffs.items():
                if not (a % 2 and b % 2 and c % 2):
                    raise ValueError("chi_{6,3} support is not on odd keys")
                terms[((a - 1) // 2, (b - 1) // 2, (c - 1) // 2)] = int(v)
            self._entries.append(terms)

    # packed sublattice digits t', a', c'+t'+d; W and S are shared by all
    # degrees, only the truncation length depends on d
    def _layout(self, d):
        lay = self._layouts.get(d)
        if lay is None:
            T = (self.prec - 2 * d) // 2
            if T < 0:
                raise PrecisionError(f"precision {self.prec} too low for degree {d}")
            T1 = (self.prec - 2) // 2
            W = 2 * T1 + self.max_degree + 1
            S = (T1 + 1) * W
            lay = self._layouts[d] = (T, W, S, (T + 1) * S)
        return lay

    def _base(self, i):
        hit = self._beta.get(i)
        if hit is None:
            T, W, S, L = self._layout(1)
            arr = [0] * L
            for (a, b, c), v in self._entries[i].items():
                t = a + b
                if t <= T:
                    arr[t * S + a * W + c + t + 1] = v
            hit = self._beta[i] = fmpz_poly(arr)
        return hit

    def monomial(self, e):
        """Packed product ``prod beta_i^e_i`` truncated for degree ``sum(e)``."""
        e = tuple(e)
        hit = self._cache.get(e)
        if hit is not None:
            return hit
        d = sum(e)
        if d > self.max_degree:
            raise ValueError(f"degree {d} exceeds the layout bound {self.max_degree}")
        i = next(k for k, x in enumerate(e) if x)
        parent = list(e)
        parent[i] -= 1
        parent = tuple(parent)
        if any(parent):
            _, _, _, L = self._layout(d)
            out = self.monomial(parent).mul_low(self._base(i), L)
        else:
            out = self._base(i)
        self._cache[e] = out
        return out

    def _inflate(self, poly, den, d):
        T, W, S, L = self._layout(d)
        lay = layout(self.prec)
        arr = []
        for k, v in enumerate(poly.coeffs()):
            if not v or k >= L:
                continue
            t, rem = divmod(k, S)
            a, u = divmod(rem, W)
            c = u - t - d
            key = lay.encode(2 * a + d, 2 * (t - a) + d, 2 * c + d)
            if key >= len(arr):
                arr.extend([0] * (key + 1 - len(arr)))
            arr[key] = v
        return SiegelExpansion._from_packed(self.prec, fmpz_poly(arr), den, d % 2)

    def evaluate(self, poly):
        """Scalar series ``poly(alpha_0, ..., alpha_6)``."""
        if poly.is_zero():
            return zero(self.prec)
        d = poly.degree
        coeffs = {}
        den = 1
        for m, v in poly.terms.items():
            scale = 1
            for i, x in enumerate(m):
                scale *= comb(6, i) ** x
            c = v / scale
            coeffs[m] = c
            den = den * c.denominator // gcd(den, c.denominator)
        acc = fmpz_poly()
        for m in poly.monomials():
            c = coeffs[m]
            acc += self.monomial(m) * (c.numerator * (den // c.denominator))
        return self._inflate(acc, den, d)

    def __call__(self, h):
        entries = [self.evaluate(e) for e in h.entries]
        return VectorExpansion(h.p, h.q + 3 * h.d, entries, character=h.d % 2)

    def __len__(self):
        return len(self._cache)


def gamma(h, chi63, floor=PREC_FLOOR):
    """Substitute ``alpha_i`` for ``a_i`` in every coordinate of ``h``."""
    return GammaEvaluator(chi63, floor)(h)


@dataclass
class ConstructedForm:
    """A form obtained from covariants, with its division bookkeeping."""

    d: int
    lam: tuple
    source: tuple
    form: VectorExpansion
    divisions: int = 0
    ledger: list = field(default_factory=list)

    @property
    def p(self):
        return self.lam[0] - self.lam[1]

    @property
    def q(self):
        return self.lam[1]

    @property
    def weight(self):
        return (self.p, self.q + 3 * self.d - 5 * self.divisions)

    @property
    def character(self):
        return (self.d - self.divisions) % 2

    def check(self):
        if self.p + 2 * self.q != 6 * self.d:
            raise ValueError("p + 2q != 6d")
        if self.form.weight != self.weight:
            raise ValueError(f"form weight {self.form.weight} != bookkeeping {self.weight}")
        if not self.form.is_zero() and self.form.character != self.character:
            raise ValueError("character disagrees with bookkeeping")
        return True

    def divide(self, g, count=1):
        """Divide by ``g`` (``chi_5`` or ``chi_10``), counting ``count`` factors of ``chi_5``."""
        F = vv_divide(self.form, g)
        F = VectorExpansion(F.j, self.form.k - 5 * count, F.entries, F.character)
        out = ConstructedForm(self.d, self.lam, self.source, F, self.divisions + count,
                              self.ledger + [f"divide by chi5^{count} -> prec {F.prec}"])
        out.check()
        return out

    def combine(self, coeffs, others, source=None):
        """Linear combination with forms of the same bookkeeping."""
        others = [o.form if isinstance(o, ConstructedForm) else o for o in others]
        F = vector_linear_combination(coeffs, [self.form] + others)
        return ConstructedForm(self.d, self.lam, source or self.source, F, self.divisions,
                               list(self.ledger))

    def to_dict(self):
        return {
            "d": self.d,
            "lambda": list(self.lam),
            "source": [str(Fraction(x)) for x in self.source],
            "weight": list(self.weight),
            "character": self.character,
            "divisions": self.divisions,
            "ledger": list(self.ledger),
            "form": self.form.to_dict(),
        }


def reduce(F, chi5, d=None, lam=None, source=(), max_order=8):
    """Divide ``F`` by ``chi_5^nu`` where ``nu`` is its order along the diagonal.

    ``F`` is a :class:`ConstructedForm` (its bookkeeping is continued) or a
    bare ``gamma`` image, whose degree is read off the weight unless given.
    """
    if isinstance(F, ConstructedForm):
        out = ConstructedForm(F.d, F.lam, F.source, F.form, F.divisions, list(F.ledger))
        F = F.form
    else:
        if d is None:
            if (F.j + 2 * F.k) % 12:
                raise ValueError(f"weight {F.weight} is not that of a gamma image; pass d and lam")
            d = (F.j + 2 * F.k) // 12
        if lam is None:
            q = F.k - 3 * d
            lam = (F.j + q, q)
        out = ConstructedForm(d, tuple(lam), tuple(source), F, 0, [])
    if F.is_zero():
        raise AllZero("cannot reduce the zero form")
    nu = vanishing_order(F, max_order=max_order)
    out.ledger.append(f"order {nu}")
    for _ in range(nu):
        out = out.divide(chi5)
    out.check()
    return out


def construct(d, lam, chi63, evaluator=None):
    """``ConstructedForm`` for each highest-weight basis vector of ``A[lam]``."""
    ev = evaluator if evaluator is not None else GammaEvaluator(chi63)
    hs = covariants(d, lam)
    n = len(hs)
    out = []
    for i, h in enumerate(hs):
        src = tuple(Fraction(int(i == k)) for k in range(n))
        out.append(ConstructedForm(d, tuple(lam), src, ev(h), 0, ["gamma image"]))
    return out


# ---------------------------------------------------------------------------
# filtration by the order along the diagonal


def _restriction_rows(forms, m):
    """Flatten the ``m``-th diagonal derivative of each form into one row."""
    data = []
    keys = set()
    for F in forms:
        parts = [restrict_diagonal(e, m, "s") for e in F.entries]
        data.append(parts)
        for i, P in enumerate(parts):
            keys.update((i,) + k for k in P.coeffs)
    keys = sorted(keys)
    return [[parts[k[0]].coeffs.get(k[1:], Fraction(0)) for k in keys] for parts in data]


def filtration(forms, max_order=8):
    """Orders along the diagonal occurring in the span of ``forms``.

    Returns ``(orders, layers)``: ``orders`` is the sorted multiset and
    ``layers[m]`` is a basis (coefficient rows) of the subspace of order ``>= m``.
    """
    n = len(forms)
    current = [[Fraction(int(i == k)) for k in range(n)] for i in range(n)]
    layers = [current]
    orders = []
    for m in range(max_order + 1):
        if not current:
            break
        rows = _restriction_rows(forms, m)
        if rows and rows[0]:
            images = linalg.matmul(current, rows)
            ker = linalg.left_kernel(images)
            nxt = linalg.matmul(ker, current) if ker else []
        else:
            nxt = current
        orders.extend([m] * (len(current) - len(nxt)))
        current = nxt
        layers.append(current)
    if current:
        raise PrecisionError(
            f"{len(current)} combinations vanish to order > {max_order}; raise the precision")
    return orders, layers


def order_table(d, lam, chi63, evaluator=None, max_order=8):
    """Multiset of vanishing orders on the image of ``A[lam]`` in degree ``d``."""
    if multiplicity(d, lam) < 1:
        raise ValueError(f"A{list(lam)} does not occur in degree {d}")
    forms = [c.form for c in construct(d, lam, chi63, evaluator)]
    orders, _ = filtration(forms, max_order)
    return orders


def subspace_of_order(forms, m, max_order=8):
    """Forms spanning the order ``>= m`` part of ``span(forms)``."""
    _, layers = filtration(forms, max_order)
    if m >= len(layers):
        return []
    return [vector_linear_combination(row, forms) for row in layers[m]]


# ---------------------------------------------------------------------------
# identification of restrictions


def identify_restriction(P, candidates, prec=None):
    """Exact coefficients ``x`` with ``P == sum x_i * candidates[i]``.

    ``candidates`` are :class:`PairSeries` (for example tensors of elliptic
    series).  All coefficients up to ``prec`` (default: the common precision)
    are matched.
    """
    cands = list(candidates)
    if not cands:
        raise NoMatch("no candidates")
    n = min([P.prec] + [c.prec for c in cands]) if prec is None else prec
    keys = sorted({k for c in cands + [P] for k in c.coeffs if k[0] + k[1] <= n})
    rows = [[c[k] for k in keys] for c in cands]
    target = [P[k] for k in keys]
    if not keys:
        raise Underdetermined("no coefficients to match")
    try:
        return linalg.solve_left(target, rows)
    except InconsistentSystem as exc:
        raise NoMatch("restriction is not in the span of the candidates") from exc


def identify_vector_restriction(parts, candidates):
    """Entrywise :func:`identify_restriction`; zero entries map to ``None``."""
    out = []
    for P in parts:
        out.append(None if P.is_zero() else identify_restriction(P, candidates))
    return out


# ---------------------------------------------------------------------------
# normalization


def _flatten_slot(F, a, b, keys=None):
    slots = F.slot(a, b)
    if keys is None:
        keys = sorted({(i, c) for i, s in enumerate(slots) for c in s})
    return [slots[i].get(c, Fraction(0)) for i, c in keys], keys


def leading_matrix(space, a=2, b=2):
    keys = sorted({(i, c) for F in space for i, s in enumerate(F.slot(a, b)) for c in s})
    return [_flatten_slot(F, a, b, keys)[0] for F in space], keys


def normalize_to_reference_basis(space, specs, a=2, b=2):
    """Basis of ``span(space)`` whose ``(a, b)`` slot vectors equal ``specs``.

    Each spec is a list over the vector entries of ``{c: coefficient}`` dicts
    (``c`` in ``R = r^(1/2)`` units).  Returns ``(forms, change)`` where
    ``forms[i] = sum change[i][j] * space[j]``.
    """
    space = list(space)
    if len(space) != len(specs):
        raise ValueError("need exactly one spec per basis element")
    keys = sorted({(i, c) for F in space for i, s in enumerate(F.slot(a, b)) for c in s}
                  | {(i, c) for s in specs for i, e in enumerate(s) for c in e})
    rows = [_flatten_slot(F, a, b, keys)[0] for F in space]
    if linalg.rank(rows) < len(space):
        raise linalg.Underdetermined("leading coefficients are linearly dependent")
    change = []
    for spec in specs:
        target = [Fraction(spec[i].get(c, 0)) if i < len(spec) else Fraction(0) for i, c in keys]
        try:
            change.append(linalg.solve_left(target, rows))
        except InconsistentSystem as exc:
            raise NoMatch("spec is not a leading vector of the space") from exc
    forms = [vector_linear_combination(row, space) for row in change]
    return forms, change


def laurent(text, var="r", step=2):
    """Parse ``"9r+34+9r^-1"``-style Laurent polynomials into ``{c: coeff}``.

    Exponents of ``var`` are multiplied by ``step`` (``r = R^2``).
    """
    import re
    s = text.replace(" ", "").replace("\\,", "").replace("{", "").replace("}", "")
    if not s:
        return {}
    if s[0] not in "+-":
        s = "+" + s
    out = {}
    for sign, coef, has_var, exp in re.findall(
            rf"([+-])(\d*)({var}(?:\^(-?\d+))?)?", s):
        if not coef and not has_var:
            continue
        c = int(coef) if coef else 1
        e = (int(exp) if exp else 1) if has_var else 0
        out[e * step] = out.get(e * step, 0) + (c if sign == "+" else -c)
    return {k: v for k, v in out.items() if v}


__all__ = [
    "NoMatch", "GammaEvaluator", "gamma", "ConstructedForm", "reduce", "construct",
    "filtration", "order_table", "subspace_of_order", "identify_restriction",
    "identify_vector_restriction", "leading_matrix", "normalize_to_reference_basis", "laurent",
    "highest_weight_basis", "CovariantPoly", "divided_space", "cascade", "CascadeStage",
]


def divided_space(d, lam, nu, chi63, chi5, evaluator=None, max_order=8):
    """Forms of order ``>= nu`` in the image of ``A[lam]``, each divided by ``chi_5^nu``.

    Returns a list of :class:`ConstructedForm` whose ``source`` rows are the
    combination coefficients over the highest-weight basis.
    """
    base = construct(d, lam, chi63, evaluator)
    forms = [c.form for c in base]
    _, layers = filtration(forms, max_order)
    rows = layers[nu] if nu < len(layers) else []
    out = []
    for row in rows:
        F = vector_linear_combination(row, forms)
        cf = ConstructedForm(d, tuple(lam), tuple(row), F, 0, [f"order >= {nu} subspace"])
        for _ in range(nu):
            cf = cf.divide(chi5)
        out.append(cf)
    return out


@dataclass
class CascadeStage:
    """One step of a division cascade: the space before dividing and what was removed."""

    weight: tuple
    character: int
    dim: int
    restrictions: list
    divisor: str
    kept: int


def cascade(forms, steps, chi5, chi10, max_order=8):
    """Repeatedly keep the forms vanishing along the diagonal and divide them.

    ``steps`` is a sequence of ``"chi10"``/``"chi5"``; a ``chi10`` step keeps
    the order ``>= 2`` part.  Returns ``(final_forms, stages, orders)`` where
    ``orders`` is the multiset of vanishing orders of the original span,
    assembled from the orders removed at each stage.
    """
    current = list(forms)
    stages = []
    orders = []
    removed = 0
    for step in steps:
        if step not in ("chi5", "chi10"):
            raise ValueError(f"unknown divisor {step!r}")
        need = 2 if step == "chi10" else 1
        vecs = [c.form for c in current]
        found, layers = filtration(vecs, max_order)
        orders.extend(removed + o for o in found if o < need)
        rows = layers[need] if need < len(layers) else []
        stages.append(CascadeStage(current[0].weight, current[0].character, len(current),
                                   [F.restrict(0) for F in vecs], step, len(rows)))
        nxt = []
        for row in rows:
            F = vector_linear_combination(row, vecs)
            src = tuple(sum(x * Fraction(c) for x, c in zip(row, col))
                        for col in zip(*[c.source for c in current]))
            cf = ConstructedForm(current[0].d, current[0].lam, src, F,
                                 current[0].divisions, list(current[0].ledger))
            nxt.append(cf.divide(chi10 if step == "chi10" else chi5, need))
        current = nxt
        removed += need
        if not current:
            break
    if current:
        found, _ = filtration([c.form for c in current], max_order)
        orders.extend(removed + o for o in found)
    return current, stages, sorted(orders)
