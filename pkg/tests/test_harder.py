import pytest
from flint import fmpz_poly

from siegelcov.harder import (
    CONGRUENCE_TABLE, CongruenceCase, DegenerateCharpoly, EXTRA_CASES, check_congruence,
    shift_poly, shifted_elliptic_charpoly,
)
from siegelcov.hecke import rescale_poly

# charpolys of T(p) read off the printed eigenvalues u +- v sqrt(D)


def quadratic(u, v, D):
    return fmpz_poly([u * u - v * v * D, -2 * u, 1])


S12_9 = {2: quadratic(-6216, 72, 25249), 3: quadratic(1074168, 16416, 25249)}
S4_16 = {
    2: rescale_poly(fmpz_poly([6800500, 215915, -1042, 1]), 192),
    3: fmpz_poly([-8835566267773683648000, -13760956598287680, 9247608, 1]),
}


def test_case_bookkeeping():
    case = CongruenceCase.from_table(12, 9)
    assert case.ell == 4057 and case.elliptic_weight == 28 and case.exponents == (7, 20)
    c = CongruenceCase.from_table(4, 16)
    assert c.ell == 1571 and c.elliptic_weight == 34 and c.exponents == (14, 19)
    assert set(CONGRUENCE_TABLE) == {(6, 12), (10, 10), (12, 9), (14, 8)}
    assert EXTRA_CASES == {(4, 16): 1571}
    with pytest.raises(KeyError):
        CongruenceCase.from_table(8, 8)


def test_shift_poly():
    f = fmpz_poly([-3, 0, 1])
    g = shift_poly(f, 5)
    assert g(fmpz_poly([5, 1])) == f


def test_shifted_elliptic_charpoly_roots():
    # S_28 at p = 2: roots -4140 +- 108 sqrt(18209), shifted by 2^7 + 2^20
    case = CongruenceCase(12, 9, 4057)
    g = shifted_elliptic_charpoly(case, 2)
    s = 2 ** 7 + 2 ** 20
    assert g.coeffs() == [(s - 4140) ** 2 - 108 ** 2 * 18209, -2 * (s - 4140), 1]


@pytest.mark.parametrize("p", [2, 3])
def test_congruence_12_9(p):
    ok, res = check_congruence(CongruenceCase(12, 9, 4057), p, S12_9[p])
    assert ok and res % 4057 == 0 and res != 0


@pytest.mark.parametrize("p", [2, 3])
def test_congruence_4_16(p):
    ok, res = check_congruence(CongruenceCase(4, 16, 1571), p, S4_16[p])
    assert ok and res != 0


def test_unrelated_prime_fails():
    ok, res = check_congruence(CongruenceCase(12, 9, 9973), 2, S12_9[2])
    assert not ok and res % 9973 != 0


def test_degenerate_charpoly_reported():
    with pytest.raises(DegenerateCharpoly):
        check_congruence(CongruenceCase(12, 9, 4057), 2, fmpz_poly([1, 2, 1]))
