from fractions import Fraction

import pytest

from siegelcov import linalg
from siegelcov.construct import (
    ConstructedForm, GammaEvaluator, NoMatch, construct, divided_space, filtration,
    gamma, identify_restriction, identify_vector_restriction, laurent,
    normalize_to_reference_basis, order_table, reduce, subspace_of_order,
)
from siegelcov.covariant import APoly, covariant_product, covariants, tautological
from siegelcov.elliptic import delta, eisenstein, quasi_monomials
from siegelcov.fourier import (
    NotDivisible, PrecisionError, SiegelExpansion, VectorExpansion, mul, restrict_diagonal,
    vector_linear_combination,
)
from siegelcov.pipeline import REFERENCE_BASES, build_space
from siegelcov.theta import alphas


def naive_gamma(poly, N):
    """Oracle: expand ``poly(alpha)`` with generic series multiplication."""
    al = alphas(N)
    acc = SiegelExpansion(N)
    for m, v in poly.terms.items():
        term = SiegelExpansion(N, {(0, 0, 0): v})
        for i, e in enumerate(m):
            for _ in range(e):
                term = mul(term, al[i])
        acc = acc + term
    return acc


def proportional_slot(F, a, b, spec):
    """Scalar ``x`` with ``F.slot(a, b) == x * spec`` entrywise, else ``None``."""
    got = F.slot(a, b)
    x = None
    for g, s in zip(got, spec):
        for c in set(g) | set(s):
            u, w = g.get(c, 0), s.get(c, 0)
            if w == 0:
                if u != 0:
                    return None
                continue
            r = Fraction(u) / w
            if x is None:
                x = r
            elif r != x:
                return None
    return x


def test_gamma_of_tautological_is_chi63(seeds):
    assert gamma(tautological(), seeds["chi63"]) == seeds["chi63"]


@pytest.mark.parametrize("d,lam", [(2, (10, 2)), (2, (6, 6)), (3, (15, 3)), (4, (12, 12))])
def test_evaluator_matches_naive_products(seeds, evaluator, d, lam):
    N = 16
    for h in covariants(d, lam)[:1]:
        fast = evaluator(h)
        for k in (0, len(h.entries) // 2, len(h.entries) - 1):
            assert fast.entries[k].truncate(N) == naive_gamma(h.entries[k], N)


def test_gamma_is_multiplicative(seeds, evaluator):
    t = tautological()
    F = seeds["chi63"]
    sq = evaluator(covariant_product(t, t))
    n = len(F.entries)
    for k in range(2 * n - 1):
        want = SiegelExpansion(F.prec)
        for i in range(max(0, k - n + 1), min(k, n - 1) + 1):
            want = want + mul(F.entries[i], F.entries[k - i])
        assert sq.entries[k] == want


def test_evaluator_floor(seeds):
    with pytest.raises(PrecisionError):
        GammaEvaluator(seeds["chi63"].truncate(6))


def test_constructed_form_bookkeeping(seeds, evaluator):
    (cf,) = construct(2, (10, 2), seeds["chi63"], evaluator)
    assert cf.weight == (8, 8) and cf.character == 0
    assert cf.check()
    (cf3,) = construct(3, (15, 3), seeds["chi63"], evaluator)
    assert cf3.weight == (12, 12) and cf3.character == 1


@pytest.mark.parametrize("lam,printed", [
    ((10, 2), ["", "", "r-2+r^-1", "3r-3r^-1", "4r+10+4r^-1", "3r-3r^-1", "r-2+r^-1", "", ""]),
    ((8, 4), ["r-2+r^-1", "2r-2r^-1", "3r+18+3r^-1", "2r-2r^-1", "r-2+r^-1"]),
    ((6, 6), ["r+10+r^-1"]),
])
def test_degree_two_leading_vectors(seeds, evaluator, lam, printed):
    (cf,) = construct(2, lam, seeds["chi63"], evaluator)
    x = proportional_slot(cf.form, 2, 2, [laurent(s) for s in printed])
    assert x is not None and x != 0


def test_hessian_scale(seeds, evaluator):
    (cf,) = construct(2, (10, 2), seeds["chi63"], evaluator)
    printed = [laurent(s) for s in
               ["", "", "r-2+r^-1", "3r-3r^-1", "4r+10+4r^-1", "3r-3r^-1", "r-2+r^-1", "", ""]]
    assert proportional_slot(cf.form, 2, 2, printed) == Fraction(-2, 45)


def test_degree_two_orders(seeds, evaluator):
    for lam in [(12, 0), (10, 2), (8, 4), (6, 6)]:
        assert order_table(2, lam, seeds["chi63"], evaluator) == [0]


def test_degree_three_orders(seeds, evaluator):
    assert order_table(3, (15, 3), seeds["chi63"], evaluator) == [2]
    assert order_table(3, (13, 5), seeds["chi63"], evaluator) == [2]
    assert order_table(3, (12, 6), seeds["chi63"], evaluator) == [0, 2]
    for lam in [(18, 0), (16, 2), (14, 4), (10, 8)]:
        assert order_table(3, lam, seeds["chi63"], evaluator) == [0]


def test_chi12_2_leading_vector(seeds, evaluator):
    (cf,) = construct(3, (15, 3), seeds["chi63"], evaluator)
    red = reduce(cf.form, seeds["chi5"], 3, (15, 3))
    assert red.weight == (12, 2) and red.character == 1
    printed = ["", "", "", "2R-2R^-1", "9R+9R^-1", "12R-12R^-1", "",
               "-12R+12R^-1", "-9R-9R^-1", "-2R+2R^-1", "", "", ""]
    x = proportional_slot(red.form, 1, 1, [laurent(s, "R", 1) for s in printed])
    assert x is not None and x != 0
    with pytest.raises(NotDivisible):
        red.divide(seeds["chi5"])


def test_chi6_5_leading_vector(seeds, evaluator):
    (cf,) = divided_space(3, (12, 6), 2, seeds["chi63"], seeds["chi5"], evaluator)
    assert cf.weight == (6, 5) and cf.character == 1
    printed = ["2R-2R^-1", "6R+6R^-1", "5R-5R^-1", "", "5R-5R^-1", "6R+6R^-1", "2R-2R^-1"]
    x = proportional_slot(cf.form, 1, 1, [laurent(s, "R", 1) for s in printed])
    assert x is not None and x != 0


def test_filtration_layers(seeds, evaluator):
    forms = [c.form for c in construct(3, (12, 6), seeds["chi63"], evaluator)]
    orders, layers = filtration(forms)
    assert orders == [0, 2]
    (F,) = subspace_of_order(forms, 1)
    assert all(restrict_diagonal(e, 0).is_zero() for e in F.entries)
    assert all(restrict_diagonal(e, 1).is_zero() for e in F.entries)


def test_taylor_coefficients_of_chi10():
    N = 24
    from siegelcov.theta import chi10
    f = chi10(N)
    D, e2, e4 = delta(N), eisenstein(2, N), eisenstein(4, N)
    for m in (1, 3, 5, 7):
        assert restrict_diagonal(f, m, "t").is_zero()
    assert restrict_diagonal(f, 2, "t") == D.tensor(D).scale(2)
    assert restrict_diagonal(f, 4, "t") == (D * e2).tensor(D * e2).scale(2)
    # xi_6 against the quasi-modular tensor basis of weight (16, 16)
    qm = [D * g for g in quasi_monomials(4, N)]
    cands = [g.tensor(h) for g in qm for h in qm]
    xi6 = restrict_diagonal(f, 6, "t")
    x = identify_restriction(xi6, cands)
    # quasi_monomials(4) is e4, e2^2
    assert x == [Fraction(-7, 24), Fraction(-5, 24), Fraction(-5, 24), Fraction(65, 24)]
    e22 = D * e2 * e2
    De4 = D * e4
    want = (De4.tensor(De4).scale(-7) + e22.tensor(e22).scale(65)
            - (De4.tensor(e22) + e22.tensor(De4)).scale(5)).scale(Fraction(1, 24))
    assert restrict_diagonal(f, 6, "t") == want


def test_identify_restriction_rejects(seeds):
    N = 24
    D = delta(N)
    with pytest.raises(NoMatch):
        identify_restriction(D.tensor(D), [(D * eisenstein(4, N)).tensor(D)])


def test_identify_vector_restriction():
    N = 20
    D, e4 = delta(N), eisenstein(4, N)
    parts = [D.tensor(D).scale(3), (D * e4).tensor(D).scale(0)]
    assert identify_vector_restriction(parts, [D.tensor(D)]) == [[3], None]


def test_laurent_parser():
    assert laurent("r-2+r^-1") == {2: 1, 0: -2, -2: 1}
    assert laurent("3r^2-5") == {4: 3, 0: -5}
    assert laurent("2R-2R^-1", "R", 1) == {1: 2, -1: -2}
    assert laurent("") == {}


def test_normalize_to_reference_basis(seeds, evaluator):
    forms, info = build_space((8, 10), seeds["chi63"], seeds["chi5"], seeds["chi10"], evaluator)
    for F, spec in zip(forms, REFERENCE_BASES[(8, 10)]):
        assert proportional_slot(F, 2, 2, spec) == 1
    assert linalg.rank(info["change"]) == 2
    with pytest.raises(NoMatch):
        normalize_to_reference_basis(forms, [REFERENCE_BASES[(8, 10)][0], [laurent("r")] * 9])


def test_g1_g2_restrictions(seeds, evaluator):
    N = seeds["N"]
    forms, _ = build_space((8, 10), seeds["chi63"], seeds["chi5"], seeds["chi10"], evaluator)
    D, e4 = delta(N), eisenstein(4, N)
    for F, scale in zip(forms, (52, 96)):
        R = F.restrict(0)
        n = R[2].prec
        assert R[2] == (e4 * D).tensor(D).scale(scale).truncate(n)
        assert R[6] == D.tensor(e4 * D).scale(scale).truncate(n)
        assert all(R[i].is_zero() for i in (0, 1, 3, 4, 5, 7, 8))
    # G1/52 - G2/96 vanishes on the diagonal and is divisible by chi5 once
    made = build_space((8, 10), seeds["chi63"], seeds["chi5"], seeds["chi10"], evaluator,
                       normalize=False)[1]["constructed"]
    _, change = normalize_to_reference_basis([c.form for c in made], REFERENCE_BASES[(8, 10)])
    row = [Fraction(1, 52) * a - Fraction(1, 96) * b for a, b in zip(*change)]
    H = made[0].combine([row[0], row[1]], [made[1]])
    with pytest.raises(ValueError):
        reduce(H.form, seeds["chi5"])
    cf = reduce(H, seeds["chi5"])
    assert cf.weight == (8, 5) and cf.character == 1


def test_d4_order_table_at_low_precision(seeds, evaluator):
    assert order_table(4, (16, 8), seeds["chi63"], evaluator) == [0, 2, 3]
    assert order_table(4, (18, 6), seeds["chi63"], evaluator) == [0, 2, 3]
    assert order_table(4, (12, 12), seeds["chi63"], evaluator) == [0, 4]
