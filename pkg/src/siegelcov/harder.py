"""Harder-type congruences between Siegel and elliptic Hecke eigenvalues.

For a Siegel space of weight ``(j, k)`` and level-one cusp forms of weight
``r = j + 2k - 2`` the predicted congruence is

    lambda(p) = p^(k-2) + a(p) + p^(j+k-1)   mod l.

Both sides are only known through characteristic polynomials, so the check
is whether ``l`` divides ``Res(f_lambda, g)`` where ``g`` is the
characteristic polynomial of ``p^(k-2) + T_p + p^(j+k-1)`` on ``S_r``.
"""

from __future__ import annotations

from dataclasses import dataclass

from flint import fmpz_poly

from . import elliptic
from .hecke import norm_and_resultant

# congruence primes for the two-dimensional spaces paired with f_28
CONGRUENCE_TABLE = {(6, 12): 823, (10, 10): 157, (12, 9): 4057, (14, 8): 647}
# the three-dimensional space S_{4,16} pairs with f_34
EXTRA_CASES = {(4, 16): 1571}


class DegenerateCharpoly(ValueError):
    pass


@dataclass(frozen=True)
class CongruenceCase:
    j: int
    k: int
    ell: int
    primes: tuple = (2, 3)

    @property
    def elliptic_weight(self):
        return self.j + 2 * self.k - 2

    @property
    def exponents(self):
        return (self.k - 2, self.j + self.k - 1)

    @classmethod
    def from_table(cls, j, k, primes=(2, 3)):
        table = {**CONGRUENCE_TABLE, **EXTRA_CASES}
        if (j, k) not in table:
            raise KeyError(f"no congruence prime recorded for weight {(j, k)}")
        return cls(j, k, table[(j, k)], tuple(primes))


def shift_poly(f, s):
    """``f(x - s)``."""
    f = fmpz_poly(f) if not isinstance(f, fmpz_poly) else f
    return f(fmpz_poly([-s, 1]))


def _check_separable(f, what):
    if f.degree() > 0 and f.gcd(f.derivative()).degree() > 0:
        raise DegenerateCharpoly(f"{what} has repeated roots")


def shifted_elliptic_charpoly(case, p):
    """Characteristic polynomial of ``p^(k-2) + T_p + p^(j+k-1)`` on ``S_r``."""
    r = case.elliptic_weight
    g = elliptic.charpoly_int(elliptic.elliptic_hecke(r, p))
    e1, e2 = case.exponents
    return shift_poly(g, p ** e1 + p ** e2)


def check_congruence(case, p, siegel_charpoly):
    """Return ``(divisible, resultant)`` for the prime ``p``."""
    f = fmpz_poly(siegel_charpoly) if not isinstance(siegel_charpoly, fmpz_poly) \
        else siegel_charpoly
    _check_separable(f, "Siegel characteristic polynomial")
    g = shifted_elliptic_charpoly(case, p)
    _check_separable(g, "elliptic characteristic polynomial")
    res = norm_and_resultant(f, g)
    return res % case.ell == 0, res
