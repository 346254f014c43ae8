from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from nilmetric.construct import example_catalog
from nilmetric.exactlin import RatMatrix

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")

small_rats = st.fractions(min_value=-4, max_value=4, max_denominator=4)


@st.composite
def rat_matrices(draw, nrows=3, ncols=3):
    return RatMatrix([[draw(small_rats) for _ in range(ncols)] for _ in range(nrows)], ncols)


@st.composite
def invertible_matrices(draw, n=3):
    m = draw(rat_matrices(n, n))
    if m.det() == 0:
        m = m + RatMatrix.identity(n) * (abs(max((abs(x) for row in m.rows for x in row), default=0)) * n + 1)
    return m


@st.composite
def nondegenerate_symmetric(draw, n=3):
    """``P^T D P`` with random signs in D and invertible P."""
    p = draw(invertible_matrices(n))
    signs = [draw(st.sampled_from([1, -1])) for _ in range(n)]
    return p.T @ RatMatrix.diag(signs) @ p


def random_rational(rng: random.Random, lo=-5, hi=5, den=4) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


@pytest.fixture(scope="session")
def catalog():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = example_catalog(name)
        return cache[name]

    return get
