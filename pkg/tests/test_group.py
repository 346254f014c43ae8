from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_rational, small_rats
from nilmetric.construct import DIM6_BRACKETS
from nilmetric.errors import InvalidShape, NotTwoStep
from nilmetric.nilalg import abelian, from_structure_constants
from nilmetric.group import (
    GroupPoint,
    LatticeSpec,
    group_inverse,
    group_multiply,
    identity,
    lattice_closure_check,
    malcev_rational,
)

H3 = from_structure_constants(3, [(0, 1, {2: 1})])
DIM6 = from_structure_constants(6, DIM6_BRACKETS)
h3_points = st.lists(small_rats, min_size=3, max_size=3)


def test_dim6_product_example():
    # exp(e4) exp(e5) = exp(e4 + e5 + 1/2 e1)
    p = group_multiply(DIM6, (0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 1, 0))
    assert p.coords == (Fraction(1, 2), 0, 0, 1, 1, 0)
    assert p.exact


def test_identity_and_inverse():
    x = (1, Fraction(2, 3), -5)
    assert group_multiply(H3, x, identity(H3)).coords == tuple(Fraction(c) for c in x)
    assert group_multiply(H3, x, group_inverse(H3, x)) == identity(H3)


@given(h3_points, h3_points)
def test_product_is_exact_bch(x, y):
    p = group_multiply(H3, x, y)
    assert p.coords[:2] == (x[0] + y[0], x[1] + y[1])
    assert p.coords[2] == x[2] + y[2] + Fraction(1, 2) * (x[0] * y[1] - x[1] * y[0])


def test_associativity_random_triples():
    rng = random.Random(7)
    for _ in range(100):
        x, y, z = ([random_rational(rng) for _ in range(3)] for _ in range(3))
        left = group_multiply(H3, group_multiply(H3, x, y), z)
        right = group_multiply(H3, x, group_multiply(H3, y, z))
        assert left == right


def test_central_coordinates_add():
    a, b = (0, 0, 0, 0, 0, 0), (Fraction(1, 3), 2, -1, 0, 0, 0)
    x = (0, 0, Fraction(5, 2), 0, 0, 0)
    assert group_multiply(DIM6, x, b).coords == tuple(Fraction(p) + Fraction(q) for p, q in zip(x, b))
    assert group_multiply(DIM6, a, b).coords == tuple(Fraction(q) for q in b)


def test_float_points_use_numeric_path():
    p = group_multiply(H3, (0.5, 0.0, 0.0), (0.0, 2.0, 0.0))
    assert not p.exact
    assert p.coords == pytest.approx((0.5, 2.0, 0.5))


def test_shape_and_step_errors():
    with pytest.raises(InvalidShape):
        group_multiply(H3, (1, 2), (1, 2, 3))
    three_step = from_structure_constants(4, [(0, 1, {2: 1}), (0, 2, {3: 1})])
    with pytest.raises(NotTwoStep):
        group_multiply(three_step, (1, 0, 0, 0), (0, 1, 0, 0))
    with pytest.raises(InvalidShape):
        LatticeSpec((1, 0, 2))


# -- lattices ---------------------------------------------------------------


def test_dim6_lattice_closed():
    res = lattice_closure_check(DIM6, LatticeSpec((1, 1, 1, 2, 1, 2)))
    assert res.closed and res.status == "Closed"


def test_dim6_identity_lattice_not_closed():
    res = lattice_closure_check(DIM6, LatticeSpec((1,) * 6))
    assert res.status == "NotClosed"
    assert res.witness == (3, 4)
    assert res.correction == (Fraction(1, 2), 0, 0, 0, 0, 0)


def test_h3_integer_lattice():
    assert not lattice_closure_check(H3, LatticeSpec((1, 1, 1))).closed
    assert lattice_closure_check(H3, LatticeSpec((1, 1, Fraction(1, 2)))).closed
    assert lattice_closure_check(H3, LatticeSpec((2, 1, 1))).closed


@given(st.lists(st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=4), min_size=3, max_size=3))
def test_abelian_lattices_always_closed(d):
    assert lattice_closure_check(abelian(3), LatticeSpec(d)).closed


def test_random_lattice_products_stay_in_lattice():
    spec = LatticeSpec((1, 1, 1, 2, 1, 2))
    rng = random.Random(3)
    for _ in range(1000):
        x = spec.point([rng.randint(-9, 9) for _ in range(6)])
        y = spec.point([rng.randint(-9, 9) for _ in range(6)])
        assert spec.contains(group_multiply(DIM6, x, y).coords)
        assert spec.contains(group_inverse(DIM6, x).coords)


def test_not_closed_lattice_has_escaping_product():
    spec = LatticeSpec((1,) * 6)
    p = group_multiply(DIM6, spec.point([0, 0, 0, 1, 0, 0]), spec.point([0, 0, 0, 0, 1, 0]))
    assert not spec.contains(p.coords)


def test_malcev_rational():
    assert malcev_rational(DIM6) and malcev_rational(H3)
    assert isinstance(GroupPoint((1, 2)).coords, tuple)
