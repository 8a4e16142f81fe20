from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from siegelcov.covariant import (
    APoly, CovariantError, CovariantPoly, covariant_product, covariants, decomposition,
    highest_weight_basis, lowering, multiplicity, raising, tautological,
    check_binomial_dimension, weight_space,
)

D4_TABLE = {(24, 0): 1, (22, 2): 1, (21, 3): 1, (20, 4): 2, (19, 5): 1, (18, 6): 3,
            (17, 7): 1, (16, 8): 3, (15, 9): 1, (14, 10): 2, (12, 12): 2}
D5_TABLE = {(30, 0): 1, (28, 2): 1, (27, 3): 1, (26, 4): 2, (25, 5): 2, (24, 6): 3,
            (23, 7): 2, (22, 8): 4, (21, 9): 3, (20, 10): 4, (19, 11): 2, (18, 12): 4,
            (17, 13): 1, (16, 14): 2}


def evaluate(p, a):
    total = Fraction(0)
    for m, v in p.terms.items():
        t = v
        for x, e in zip(a, m):
            t *= Fraction(x) ** e
        total += t
    return total


def covariant_values(h, a):
    return [evaluate(e, a) for e in h.entries]


def substitute_unipotent(coeffs):
    """Coefficients ``a'`` of ``f(x1 + x2, x2)``: ``a'_m = sum_i binom(m, i) a_i``."""
    return [sum(comb(m, i) * coeffs[i] for i in range(m + 1)) for m in range(len(coeffs))]


def transform_binary(vals):
    """Coefficients of ``P(x1 + x2, x2)`` for ``P = sum vals[k] x1^(p-k) x2^k``."""
    p = len(vals) - 1
    out = [Fraction(0)] * (p + 1)
    for k, v in enumerate(vals):
        for l in range(p - k + 1):
            out[k + l] += v * comb(p - k, l)
    return out


def reverse_sextic(coeffs):
    # f(x2, -x1)
    return [(-1) ** i * coeffs[6 - i] for i in range(7)]


def transform_rotation(vals):
    p = len(vals) - 1
    return [(-1) ** k * vals[p - k] for k in range(p + 1)]


def test_decomposition_small_degrees():
    assert decomposition(2) == [((12, 0), 1), ((10, 2), 1), ((8, 4), 1), ((6, 6), 1)]
    assert decomposition(3) == [((18, 0), 1), ((16, 2), 1), ((15, 3), 1), ((14, 4), 1),
                                ((13, 5), 1), ((12, 6), 2), ((10, 8), 1)]


def test_multiplicity_tables():
    assert dict(decomposition(4)) == D4_TABLE
    assert dict(decomposition(5)) == D5_TABLE


def test_multiplicity_degree_eight():
    assert multiplicity(8, (26, 22)) == 7


@pytest.mark.parametrize("d", range(1, 9))
def test_binomial_dimension(d):
    assert check_binomial_dimension(d)


def test_bad_lambda():
    with pytest.raises(CovariantError):
        multiplicity(2, (10, 3))
    with pytest.raises(CovariantError):
        highest_weight_basis(2, (11, 1))


def test_hessian_entries():
    (h,) = covariants(2, (10, 2))
    printed = ["a0*a2 - a1^2", "4*a0*a3 - 4*a1*a2", "6*a0*a4 + 4*a1*a3 - 10*a2^2",
               "4*a0*a5 + 16*a1*a4 - 20*a2*a3", "a0*a6 + 14*a1*a5 + 5*a2*a4 - 20*a3^2"]
    for e, s in zip(h.entries, printed):
        assert e.proportional_to(APoly.parse(s)) is not None
    assert h.entries[-1].proportional_to(APoly.parse("a4*a6 - a5^2")) is not None


def test_a84_entries():
    (h,) = covariants(2, (8, 4))
    printed = ["a0*a4 - 4*a1*a3 + 3*a2^2", "2*a0*a5 - 6*a1*a4 + 4*a2*a3",
               "a0*a6 - 9*a2*a4 + 8*a3^2"]
    for e, s in zip(h.entries, printed):
        assert e.proportional_to(APoly.parse(s)) is not None
    assert h.entries[-1].proportional_to(APoly.parse("a2*a6 - 4*a3*a5 + 3*a4^2")) is not None


def test_invariant_of_degree_two():
    (h,) = covariants(2, (6, 6))
    assert h.entries[0].proportional_to(APoly.parse("a0*a6 - 6*a1*a5 + 15*a2*a4 - 10*a3^2"))


@pytest.mark.parametrize("d,lam", [(2, (10, 2)), (3, (12, 6)), (3, (15, 3)), (4, (16, 8)),
                                   (5, (18, 12))])
def test_sl2_relations(d, lam):
    for v in highest_weight_basis(d, lam):
        assert raising(v).is_zero()
        p = lam[0] - lam[1]
        cur = v
        for _ in range(p + 1):
            cur = lowering(cur)
        assert cur.is_zero()
        # [E, F] = H on the weight-p vector
        assert raising(lowering(v)) == v * p


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, (10, 2)), (2, (8, 4)), (3, (12, 6)), (3, (16, 2)), (4, (12, 12))]),
       st.lists(st.integers(-5, 5), min_size=7, max_size=7))
def test_equivariance(case, a):
    # oracle: a covariant commutes with substitutions generating SL2(Z)
    d, lam = case
    for h in covariants(d, lam):
        vals = covariant_values(h, a)
        assert covariant_values(h, substitute_unipotent(a)) == transform_binary(vals)
        assert covariant_values(h, reverse_sextic(a)) == transform_rotation(vals)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=7, max_size=7))
def test_commutator_on_random_polynomials(a):
    p = APoly({(1, 0, 0, 0, 0, 0, 1): a[0], (0, 1, 0, 0, 0, 1, 0): a[1],
               (0, 0, 2, 0, 0, 0, 0): a[2], (0, 0, 0, 2, 0, 0, 0): a[3],
               (1, 1, 0, 0, 0, 0, 0): a[4], (0, 0, 0, 0, 0, 1, 1): a[5]})
    # [E, F] acts on each monomial by its weight
    comm = raising(lowering(p)) - lowering(raising(p))
    expected = APoly({m: v * sum((6 - 2 * i) * e for i, e in enumerate(m))
                      for m, v in p.terms.items()})
    assert comm == expected


def test_weight_space_ordering():
    ws = weight_space(2, 10)
    assert ws == tuple(sorted(ws, reverse=True))


def test_tautological_and_product():
    t = tautological()
    assert t.p == 6 and t.lam == (6, 0)
    sq = covariant_product(t, t)
    assert sq.lam == (12, 0)
    assert sq.entries[0] == APoly.parse("a0^2")
    assert sq.entries[12] == APoly.parse("a6^2")


def test_covariant_serialization():
    (h,) = covariants(3, (15, 3))
    assert CovariantPoly.from_dict(h.to_dict()) == h
