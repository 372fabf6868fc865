import random

import pytest
from gmpy2 import mpq
from hypothesis import settings

from skewrank.exterior import Multivector, decomposable

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def rand_vectors(rng, n, k, lo=-5, hi=5):
    return [[mpq(rng.randint(lo, hi)) for _ in range(n)] for _ in range(k)]


def rand_pure(rng, n, d):
    while True:
        v = decomposable(rand_vectors(rng, n, d))
        if not v.is_zero():
            return v


def rand_multivector(rng, n, d, dual=False, density=0.5):
    from skewrank.exterior import basis
    coeffs = {}
    for k in basis(n, d):
        if rng.random() < density:
            coeffs[k] = mpq(rng.randint(-4, 4))
    return Multivector(n, d, coeffs, dual)


def e(n, *idx, dual=False):
    return Multivector.basis_element(n, idx, dual=dual)


def segre():
    """f0f1f2 + f0f3f4 + f1f3f5 in six variables."""
    return e(6, 0, 1, 2) + e(6, 0, 3, 4) + e(6, 1, 3, 5)


@pytest.fixture
def rng():
    return random.Random(1234)


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
