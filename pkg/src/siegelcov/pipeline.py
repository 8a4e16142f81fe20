"""Named spaces of cusp forms and how to build them from covariants."""

from __future__ import annotations

from dataclasses import dataclass

from .construct import GammaEvaluator, cascade, construct, divided_space, laurent, \
    normalize_to_reference_basis


@dataclass(frozen=True)
class SpaceRecipe:
    weight: tuple
    d: int
    lam: tuple
    nu: int = 0
    steps: tuple = ()


SPACES = {
    (12, 6): SpaceRecipe((12, 6), 2, (12, 0)),
    (8, 8): SpaceRecipe((8, 8), 2, (10, 2)),
    (4, 10): SpaceRecipe((4, 10), 2, (8, 4)),
    (0, 12): SpaceRecipe((0, 12), 2, (6, 6)),
    (12, 2): SpaceRecipe((12, 2), 3, (15, 3), 2),
    (6, 5): SpaceRecipe((6, 5), 3, (12, 6), 2),
    (8, 10): SpaceRecipe((8, 10), 4, (16, 8), 2),
    (12, 8): SpaceRecipe((12, 8), 4, (18, 6), 2),
    (6, 12): SpaceRecipe((6, 12), 5, (18, 12), 3),
    (10, 10): SpaceRecipe((10, 10), 5, (20, 10), 3),
    (12, 9): SpaceRecipe((12, 9), 5, (21, 9), 3),
    (14, 8): SpaceRecipe((14, 8), 5, (22, 8), 3),
    (4, 16): SpaceRecipe((4, 16), 8, (26, 22), 6, ("chi10", "chi10", "chi5", "chi5")),
}


def _spec(*entries):
    return [laurent(e) for e in entries]


# leading q1 q2 vectors of the normalized bases
REFERENCE_BASES = {
    (8, 10): [
        _spec("r-2+r^-1", "4r-4r^-1", "9r+34+9r^-1", "13r-13r^-1", "15r-30+15r^-1",
              "13r-13r^-1", "9r+34+9r^-1", "4r-4r^-1", "r-2+r^-1"),
        _spec("3r-6+3r^-1", "12r-12r^-1", "22r+52+22r^-1", "24r-24r^-1", "25r-50+25r^-1",
              "24r-24r^-1", "22r+52+22r^-1", "12r-12r^-1", "3r-6+3r^-1"),
    ],
    (6, 12): [
        _spec("2r+20+2r^-1", "6r-6r^-1", "33r-66+33r^-1", "56r-56r^-1", "33r-66+33r^-1",
              "6r-6r^-1", "2r+20+2r^-1"),
        _spec("", "", "r-2+r^-1", "2r-2r^-1", "r-2+r^-1", "", ""),
    ],
    (4, 16): [
        _spec("r+10+r^-1", "2r-2r^-1", "3r-6+3r^-1", "2r-2r^-1", "r+10+r^-1"),
        _spec("r+10+r^-1", "2r-2r^-1", "3r-42+3r^-1", "2r-2r^-1", "r+10+r^-1"),
        _spec("5r+104+5r^-1", "10r-10r^-1", "15r-138+15r^-1", "10r-10r^-1", "5r+104+5r^-1"),
    ],
}


def build_space(weight, chi63, chi5, chi10, evaluator=None, normalize=True):
    """Basis (list of ConstructedForm-like forms) for a registered space.

    Returns ``(forms, info)`` where ``forms`` are VectorExpansions and
    ``info`` carries the ConstructedForm ledgers and cascade stages.
    """
    weight = tuple(weight)
    if weight not in SPACES:
        raise KeyError(f"no recipe for weight {weight}; known: {sorted(SPACES)}")
    rec = SPACES[weight]
    ev = evaluator if evaluator is not None else GammaEvaluator(chi63)
    info = {"recipe": rec}
    if rec.steps:
        base = construct(rec.d, rec.lam, chi63, ev)
        made, stages, orders = cascade(base, rec.steps, chi5, chi10)
        info["stages"] = stages
        info["orders"] = orders
    elif rec.nu:
        made = divided_space(rec.d, rec.lam, rec.nu, chi63, chi5, ev)
    else:
        made = construct(rec.d, rec.lam, chi63, ev)
    info["constructed"] = made
    forms = [c.form for c in made]
    if normalize and weight in REFERENCE_BASES:
        forms, change = normalize_to_reference_basis(forms, REFERENCE_BASES[weight])
        info["change"] = change
    return forms, info
