import pytest

from siegelcov.construct import GammaEvaluator
from siegelcov.theta import chi5, chi10, chi63

N = 24


@pytest.fixture(scope="session")
def seeds():
    return {"N": N, "chi5": chi5(N), "chi10": chi10(N), "chi63": chi63(N)}


@pytest.fixture(scope="session")
def evaluator(seeds):
    return GammaEvaluator(seeds["chi63"])
