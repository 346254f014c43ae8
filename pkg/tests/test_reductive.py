from __future__ import annotations

import random

import pytest
from hypothesis import given

from conftest import nondegenerate_symmetric, random_rational
from nilmetric.construct import (
    euclidean_factor,
    from_data_set,
    from_j_maps,
    heisenberg,
    flip_center_sign,
    modified_cotangent,
)
from nilmetric.errors import DegenerateCenter, NotAdInvariant, NotTwoStep
from nilmetric.exactlin import RatMatrix, SymmetricForm
from nilmetric.metgeo import MetricNilLieAlgebra, center_splitting
from nilmetric.nilalg import abelian, from_structure_constants
from nilmetric.reductive import (
    corank_decomposition,
    is_ad_invariant,
    isotropy_algebra,
    naturally_reductive_check,
    skew_centralizer,
)

H3 = from_structure_constants(3, [(0, 1, {2: 1})])
H5 = from_structure_constants(5, [(0, 1, {4: 1}), (2, 3, {4: 1})])


def random_metric(rng: random.Random, n: int) -> RatMatrix:
    while True:
        P = RatMatrix([[random_rational(rng) for _ in range(n)] for _ in range(n)], n)
        if P.det() != 0:
            break
    signs = [rng.choice([1, -1]) for _ in range(n)]
    return P.T @ RatMatrix.diag(signs) @ P


def random_nondegenerate_center(alg, seed: int, count: int):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        m = MetricNilLieAlgebra(alg, SymmetricForm(random_metric(rng, alg.dim)))
        try:
            center_splitting(m)
        except DegenerateCenter:
            continue
        out.append(m)
    return out


# -- ad-invariance ----------------------------------------------------------


def test_ad_invariance_examples(catalog):
    assert is_ad_invariant(catalog("dim6_cotangent_h3"))
    res = is_ad_invariant(catalog("h3_riemannian"))
    assert not res and res.witness == (0, 1, 2)
    assert is_ad_invariant(abelian(3), SymmetricForm.diag([1, -1, 1]))
    with pytest.raises(TypeError):
        is_ad_invariant(H3)


def test_free_three_step_metric_is_ad_invariant(catalog):
    assert is_ad_invariant(catalog("free3step2gen"))


# -- natural reductivity ------------------------------------------------------


@pytest.mark.parametrize("name", ["h3_riemannian", "h3_lorentz_1", "h3_lorentz_2", "heisenberg_2n1", "modified_tangent"])
def test_naturally_reductive_examples(catalog, name):
    rep = naturally_reductive_check(catalog(name))
    assert rep.verdict.kind == "NaturallyReductive"
    assert rep.j_injective and rep.closed_under_bracket and rep.tau_skew


@pytest.mark.parametrize("name", ["so3_adjoint_dataset", "so_pq_evaluation"])
def test_data_set_outputs_are_naturally_reductive_with_same_tau(catalog, name):
    d = catalog(name)
    rep = naturally_reductive_check(from_data_set(d))
    assert rep.verdict.ok
    assert rep.tau_algebra().c == d.g.c


def test_inapplicable_and_errors(catalog):
    rep = naturally_reductive_check(catalog("r_x_h3_lorentz"))
    assert rep.verdict.kind == "Inapplicable" and not rep.j_injective
    with pytest.raises(DegenerateCenter):
        naturally_reductive_check(catalog("dim6_cotangent_h3"))
    with pytest.raises(NotTwoStep):
        naturally_reductive_check(catalog("free3step2gen"))


def _plane_rotation(n, a, b):
    rows = [[0] * n for _ in range(n)]
    rows[b][a], rows[a][b] = 1, -1
    return RatMatrix(rows)


def test_span_not_closed_fails():
    # [L12, L23] is a multiple of L13, outside span{L12, L23}
    m = from_j_maps(SymmetricForm.diag([1, 1]), SymmetricForm.diag([1] * 3),
                    [_plane_rotation(3, 0, 1), _plane_rotation(3, 1, 2)])
    rep = naturally_reductive_check(m)
    assert rep.verdict.kind == "Fails"
    assert rep.verdict.witness == (0, 1)
    assert not rep.closed_under_bracket


def test_tau_not_skew_fails():
    # span{L12, L13, L23} is closed, but a non-Killing-proportional metric on z spoils skewness
    js = [_plane_rotation(3, 0, 1), _plane_rotation(3, 0, 2), _plane_rotation(3, 1, 2)]
    m = from_j_maps(SymmetricForm.diag([1, 2, 1]), SymmetricForm.diag([1, 1, 1]), js)
    rep = naturally_reductive_check(m)
    assert rep.closed_under_bracket and not rep.tau_skew
    assert rep.verdict.kind == "Fails"
    ok = from_j_maps(SymmetricForm.diag([1, 1, 1]), SymmetricForm.diag([1, 1, 1]), js)
    assert naturally_reductive_check(ok).verdict.ok


@pytest.mark.parametrize("alg, seed", [(H3, 11), (H5, 29)])
def test_random_heisenberg_metrics_are_naturally_reductive(alg, seed):
    for m in random_nondegenerate_center(alg, seed, 20):
        assert naturally_reductive_check(m).verdict.kind == "NaturallyReductive"


@given(nondegenerate_symmetric(5))
def test_flip_preserves_verdict(g):
    m = MetricNilLieAlgebra(H5, SymmetricForm(g))
    try:
        center_splitting(m)
    except DegenerateCenter:
        return
    a = naturally_reductive_check(m).verdict.kind
    b = naturally_reductive_check(flip_center_sign(m)).verdict.kind
    assert a == b


# -- isotropy ----------------------------------------------------------------


@pytest.mark.parametrize("name", ["h3_riemannian", "h3_lorentz_1", "h3_lorentz_2"])
def test_h3_isotropy_is_centralizer(catalog, name):
    m = catalog(name)
    iso = isotropy_algebra(m)
    split = center_splitting(m)
    assert iso.dim == 1
    assert skew_centralizer(split.gram_v, split.j_ops[0]).ncols == 1
    for A, B in iso.basis:
        assert A.is_zero()
        assert B.commutator(split.j_ops[0]).is_zero()


def test_isotropy_dims(catalog):
    assert isotropy_algebra(catalog("heisenberg_2n1")).dim == 4
    assert isotropy_algebra(from_data_set(catalog("so3_adjoint_dataset"))).dim == 3
    assert isotropy_algebra(from_data_set(catalog("so_pq_evaluation"))).dim == 3


def test_isotropy_of_abelian_is_orthogonal_algebra():
    for n, signs in ((3, [1, 1, 1]), (4, [1, 1, -1, -1])):
        m = MetricNilLieAlgebra(abelian(n), SymmetricForm.diag(signs))
        assert isotropy_algebra(m).dim == n * (n - 1) // 2


def test_isotropy_heisenberg_general_t():
    # h5 with t = diag(J, 2J): centralizer of t in so(4) is so(2) + so(2)
    t = RatMatrix([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -2], [0, 0, 2, 0]])
    m = heisenberg(2, SymmetricForm.diag([1] * 4), t, 1)
    split = center_splitting(m)
    iso = isotropy_algebra(m)
    assert iso.dim == skew_centralizer(split.gram_v, split.j_ops[0]).ncols == 2


# -- corank ------------------------------------------------------------------


def test_corank_dim6(catalog):
    m = catalog("dim6_cotangent_h3")
    nf = corank_decomposition(m)
    assert nf.corank == 0
    assert nf.z_tilde_basis.ncols == 0
    P = nf.change_of_basis
    assert P.det() != 0
    assert P.T @ m.gram @ P == nf.rebuilt.gram
    for a in range(6):
        for b in range(6):
            assert P @ nf.rebuilt.alg.c[a][b] == m.bracket(P.column(a), P.column(b))
    for r in nf.rho:
        assert (nf.inner_v.gram @ r + r.T @ nf.inner_v.gram).is_zero()
    k = len(nf.rho)
    for a in range(k):
        u = tuple(int(i == a) for i in range(k))
        assert all(x == 0 for x in sum_rho(nf.rho, u) @ u)


def sum_rho(rho, u):
    out = RatMatrix.zeros(rho[0].nrows, rho[0].ncols)
    for c, r in zip(u, rho):
        out = out + r * c
    return out


def test_corank_with_flat_factor(catalog):
    m = euclidean_factor(2, catalog("dim6_cotangent_h3"))
    nf = corank_decomposition(m)
    assert nf.corank == 2
    assert nf.z_tilde_basis.ncols == 2
    assert nf.n_tilde_basis.ncols == 6
    assert nf.rebuilt.dim == 6


def test_corank_rejects_non_ad_invariant(catalog):
    with pytest.raises(NotAdInvariant) as info:
        corank_decomposition(catalog("h3_riemannian"))
    assert info.value.witness == (0, 1, 2)


def test_corank_of_modified_cotangent_round_trips():
    e = [[int(i == c) for i in range(3)] for c in range(3)]

    def cross(x, y):
        return [x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]]

    rho = [RatMatrix.from_columns([cross(e[c], e[a]) for a in range(3)], 3) for c in range(3)]
    m = modified_cotangent(3, SymmetricForm.diag([1, 1, 1]), rho)
    nf = corank_decomposition(m)
    assert nf.corank == 0 and nf.rebuilt.dim == 6
