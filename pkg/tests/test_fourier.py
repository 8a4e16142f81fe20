from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from siegelcov.fourier import (
    AllZero, CharacterMismatch, FourierError, NotDivisible, PairSeries, PrecisionError,
    SiegelExpansion, VectorExpansion, add, divide_exact, layout, linear_combination, mul,
    power, psd_key, restrict_diagonal, vanishing_order, vv_divide, vv_multiply,
)


def psd_keys(prec):
    out = []
    for a in range(prec + 1):
        for b in range(prec + 1 - a):
            c = 0
            while c * c <= 4 * a * b:
                out.append((a, b, c))
                if c:
                    out.append((a, b, -c))
                c += 1
    return out


def naive_mul(f, g):
    n = min(f.prec, g.prec)
    out = {}
    for (a1, b1, c1), u in f.coeffs.items():
        for (a2, b2, c2), v in g.coeffs.items():
            if a1 + a2 + b1 + b2 <= n:
                k = (a1 + a2, b1 + b2, c1 + c2)
                out[k] = out.get(k, 0) + u * v
    return SiegelExpansion(n, out, f.character ^ g.character)


@st.composite
def expansions(draw, prec=5, min_total=0, character=0):
    keys = [k for k in psd_keys(prec) if k[0] + k[1] >= min_total]
    chosen = draw(st.lists(st.sampled_from(keys), max_size=12, unique=True))
    vals = draw(st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=6),
                         min_size=len(chosen), max_size=len(chosen)))
    return SiegelExpansion(prec, dict(zip(chosen, vals)), character)


def test_layout_roundtrip():
    lay = layout(6)
    for key in psd_keys(6):
        e = lay.encode(*key)
        assert lay.decode(e) == key
        assert lay.valid(e)


def test_rejects_non_psd_key():
    with pytest.raises(FourierError):
        SiegelExpansion(4, {(1, 1, 3): 1})


def test_keys_past_precision_are_dropped():
    f = SiegelExpansion(2, {(1, 1, 0): 1, (2, 1, 0): 5})
    assert f.coeffs == {(1, 1, 0): 1}
    with pytest.raises(PrecisionError):
        f[(2, 1, 0)]


@settings(max_examples=40, deadline=None)
@given(expansions(), expansions())
def test_mul_matches_brute_force_convolution(f, g):
    assert mul(f, g).coeffs == naive_mul(f, g).coeffs


@settings(max_examples=30, deadline=None)
@given(expansions(), expansions(), expansions())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert (f + g) + h == f + (g + h)
    assert mul(f, g) == mul(g, f)
    assert mul(mul(f, g), h) == mul(f, mul(g, h))
    assert mul(f, g + h) == mul(f, g) + mul(f, h)
    assert f - f == SiegelExpansion(f.prec)


@settings(max_examples=30, deadline=None)
@given(expansions(), expansions())
def test_support_stays_psd(f, g):
    for F in (f + g, mul(f, g), f.scale(Fraction(3, 7)), f.swap(), f.reflect()):
        assert all(psd_key(*k) for k in F.coeffs)
        assert F.check_support()


@settings(max_examples=30, deadline=None)
@given(expansions(prec=8), st.sampled_from([(1, 1, 1), (1, 1, -1), (1, 1, 0), (2, 1, 1)]),
       st.integers(min_value=1, max_value=5))
def test_divide_round_trip(f, lead, c):
    # divisor with a unit or non-unit leading coefficient
    g = SiegelExpansion(8, {lead: c, (2, 2, 1): 3, (1, 2, 0): -1})
    prod = mul(f, g)
    h = divide_exact(prod, g)
    t = lead[0] + lead[1]
    assert h.prec == 8 - t
    assert h == f.truncate(8 - t)


def test_divide_detects_non_multiple():
    g = SiegelExpansion(8, {(1, 1, 1): 1, (1, 1, -1): -1})
    f = SiegelExpansion(8, {(1, 1, 0): 1})
    with pytest.raises(NotDivisible):
        divide_exact(f, g)


def test_power_matches_repeated_multiplication():
    f = SiegelExpansion(6, {(1, 1, 0): 2, (1, 1, 1): -1, (2, 1, 2): 3})
    assert power(f, 3) == mul(f, mul(f, f))


def test_characters_are_tracked():
    f = SiegelExpansion(4, {(1, 1, 1): 1}, character=1)
    g = SiegelExpansion(4, {(1, 1, 0): 1}, character=0)
    assert mul(f, f).character == 0
    assert mul(f, g).character == 1
    with pytest.raises(CharacterMismatch):
        add(f, g)


def test_linear_combination():
    f = SiegelExpansion(4, {(1, 1, 0): 1})
    g = SiegelExpansion(4, {(1, 1, 1): 2})
    h = linear_combination([Fraction(1, 2), 3], [f, g])
    assert h.coeffs == {(1, 1, 0): Fraction(1, 2), (1, 1, 1): 6}


def test_serialization_round_trip():
    f = SiegelExpansion(5, {(1, 1, 1): Fraction(-3, 4), (2, 3, -4): 7}, character=1)
    assert SiegelExpansion.from_json(f.to_json()) == f
    assert SiegelExpansion.from_dict(f.to_dict()).character == 1
    V = VectorExpansion(1, 3, [f, f.scale(2)])
    assert VectorExpansion.from_dict(V.to_dict()) == V


def test_restriction_units():
    f = SiegelExpansion(4, {(2, 2, 2): 1, (2, 2, 0): -2, (2, 2, -2): 1})
    assert restrict_diagonal(f, 0).is_zero()
    assert restrict_diagonal(f, 1).is_zero()
    assert restrict_diagonal(f, 2, "s")[(2, 2)] == 8
    assert restrict_diagonal(f, 2, "t")[(2, 2)] == 2
    assert vanishing_order(f) == 2


def test_vanishing_order_of_zero_raises():
    with pytest.raises(AllZero):
        vanishing_order(SiegelExpansion(4))


def test_vv_multiply_and_divide():
    x = SiegelExpansion(6, {(1, 1, 1): 1, (1, 1, -1): -1})
    F = VectorExpansion(1, 2, [SiegelExpansion(6, {(1, 1, 0): 1}), SiegelExpansion(6, {(2, 1, 1): 2})])
    G = vv_multiply(F, x)
    assert G.weight == (1, 2)
    back = vv_divide(G, x)
    assert back == F.truncate(back.prec)


def test_pair_series_arithmetic():
    P = PairSeries(4, {(1, 1): 2, (2, 1): 1})
    Q = PairSeries(4, {(1, 1): 1})
    assert (P - Q)[(1, 1)] == 1
    assert (P * Q)[(2, 2)] == 2
    assert P.swap()[(1, 2)] == 1
