"""Left-invariant pseudo-Riemannian geometry of metric nilpotent Lie algebras.

Everything here is evaluated at the identity: vectors are coordinate
tuples in the algebra's basis and the metric is a constant Gram matrix.
Connection and curvature come straight from the Koszul-type formula and
the definition ``R(x, y) = [nabla_x, nabla_y] - nabla_[x,y]``; the
``*_case_table`` functions give the closed forms available once the center
is nondegenerate, and are used as cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import (
    DegenerateCenter,
    DegenerateMetric,
    DegeneratePlane,
    InternalInconsistency,
    InvalidShape,
)
from .exactlin import (
    RatMatrix,
    SymmetricForm,
    Vector,
    coordinates,
    dot,
    is_zero_vec,
    mat_exp_phi,
    orthogonal_basis,
    orthogonal_complement,
    unit_vec,
    vadd,
    vec,
    vscale,
    vsub,
    zero_vec,
)
from .nilalg import NilLieAlgebra, structure_report


@dataclass(frozen=True, eq=False)
class MetricNilLieAlgebra:
    """A nilpotent Lie algebra with a nondegenerate metric.

    Any step is accepted; operations that need the ``z + v`` splitting call
    :meth:`NilLieAlgebra.require_two_step` themselves.
    """

    alg: NilLieAlgebra
    metric: SymmetricForm
    name: str = ""

    def __post_init__(self):
        if self.metric.dim != self.alg.dim:
            raise InvalidShape("metric and algebra dimensions differ")
        if not self.metric.is_nondegenerate():
            raise DegenerateMetric("metric is degenerate")

    def __eq__(self, other) -> bool:
        if not isinstance(other, MetricNilLieAlgebra):
            return NotImplemented
        return self.alg == other.alg and self.metric == other.metric

    def __hash__(self) -> int:
        return hash((self.alg, self.metric.gram))

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def gram(self) -> RatMatrix:
        return self.metric.gram

    @cached_property
    def gram_inv(self) -> RatMatrix:
        return self.metric.gram.inverse()

    def pair(self, x, y) -> Fraction:
        return self.metric.pair(x, y)

    def bracket(self, x, y) -> Vector:
        return self.alg.bracket(x, y)

    def ad_adjoint(self, x) -> RatMatrix:
        """Metric adjoint ``ad(x)^*`` with ``<ad(x)^* y, w> = <y, [x, w]>``."""
        return self.gram_inv @ self.alg.ad(x).T @ self.gram

    @cached_property
    def connection_matrices(self) -> tuple[RatMatrix, ...]:
        """``N_a`` with ``N_a y = nabla_{e_a} y``."""
        n = self.dim
        adj = [self.ad_adjoint(unit_vec(n, a)) for a in range(n)]
        mats = []
        for a in range(n):
            cols = []
            for b in range(n):
                col = vsub(
                    vsub(tuple(self.alg.c[a][b]), adj[a].column(b)),
                    adj[b].column(a),
                )
                cols.append(vscale(Fraction(1, 2), col))
            mats.append(RatMatrix.from_columns(cols, n))
        return tuple(mats)

    def nabla(self, x) -> RatMatrix:
        x = vec(x)
        out = RatMatrix.zeros(self.dim, self.dim)
        for a, xa in enumerate(x):
            if xa:
                out = out + self.connection_matrices[a] * xa
        return out

    def curvature_operator(self, x, y) -> RatMatrix:
        nx, ny = self.nabla(x), self.nabla(y)
        return nx.commutator(ny) - self.nabla(self.bracket(x, y))

    @cached_property
    def basis_curvature(self) -> dict[tuple[int, int], RatMatrix]:
        n = self.dim
        return {
            (a, b): self.curvature_operator(unit_vec(n, a), unit_vec(n, b))
            for a in range(n)
            for b in range(n)
        }


def covariant_derivative(m: MetricNilLieAlgebra, x, y) -> Vector:
    """``nabla_x y = 1/2([x, y] - ad(x)^* y - ad(y)^* x)``."""
    x, y = vec(x), vec(y)
    term = vsub(vsub(m.bracket(x, y), m.ad_adjoint(x) @ y), m.ad_adjoint(y) @ x)
    return vscale(Fraction(1, 2), term)


def curvature(m: MetricNilLieAlgebra, x, y, z) -> Vector:
    """``R(x, y) z`` with ``R(x, y) = [nabla_x, nabla_y] - nabla_[x,y]``."""
    return m.curvature_operator(x, y) @ vec(z)


def sectional_curvature(m: MetricNilLieAlgebra, x, y) -> Fraction:
    x, y = vec(x), vec(y)
    q = m.pair(x, x) * m.pair(y, y) - m.pair(x, y) ** 2
    if q == 0:
        raise DegeneratePlane("span{x, y} is degenerate (Q = 0)", witness=(x, y))
    return m.pair(curvature(m, x, y, y), x) / q


@dataclass(frozen=True)
class FlatnessResult:
    flat: bool
    witness: tuple[int, int, int] | None = None
    value: Vector | None = None


def flatness_check(m: MetricNilLieAlgebra) -> FlatnessResult:
    """Exact test of ``R = 0`` on all basis triples.

    Triples of the form ``(e_a, e_b, e_b)`` are scanned first so that a
    witness, when one exists there, also shows a nonzero sectional numerator.
    """
    n = m.dim
    ops = m.basis_curvature
    order = [(a, b, b) for a in range(n) for b in range(n)]
    order += [(a, b, c) for a in range(n) for b in range(n) for c in range(n) if c != b]
    for a, b, c in order:
        val = ops[(a, b)].column(c)
        if not is_zero_vec(val):
            return FlatnessResult(False, (a, b, c), val)
    return FlatnessResult(True)


# --------------------------------------------------------------------------
# center splitting and j-maps


@dataclass(frozen=True, eq=False)
class CenterSplitting:
    """Orthogonal splitting ``n = z + v`` with ``v = z^perp``.

    ``j_ops[i]`` is the matrix of ``j(z_i)`` in the ``v_basis`` coordinates,
    defined by ``<[u, w], z_i> = <j(z_i) u, w>``.
    """

    m: MetricNilLieAlgebra
    z_basis: RatMatrix
    v_basis: RatMatrix
    gram_z: RatMatrix
    gram_v: RatMatrix
    j_ops: tuple
    j_injective: bool

    @property
    def p(self) -> int:
        return self.z_basis.ncols

    @property
    def q(self) -> int:
        return self.v_basis.ncols

    @cached_property
    def adapted_basis(self) -> RatMatrix:
        """Columns ``z_1..z_p, v_1..v_q``."""
        return self.z_basis.hstack(self.v_basis)

    @cached_property
    def _adapted_inv(self) -> RatMatrix:
        return self.adapted_basis.inverse()

    def split(self, x) -> tuple[Vector, Vector]:
        """Coordinates of ``x`` in ``z_basis`` and in ``v_basis``."""
        c = self._adapted_inv @ vec(x)
        return c[: self.p], c[self.p:]

    def z_part(self, x) -> Vector:
        zc, _ = self.split(x)
        return self.z_basis @ zc if self.p else zero_vec(self.m.dim)

    def v_part(self, x) -> Vector:
        _, vc = self.split(x)
        return self.v_basis @ vc if self.q else zero_vec(self.m.dim)

    def j(self, zcoords) -> RatMatrix:
        """``j`` of the central vector with the given z-coordinates."""
        out = RatMatrix.zeros(self.q, self.q)
        for c, op in zip(vec(zcoords), self.j_ops):
            if c:
                out = out + op * c
        return out

    def j_of(self, x) -> RatMatrix:
        """``j(x)`` for a central ambient vector ``x``."""
        return self.j(coordinates(self.z_basis, x))

    def j_apply(self, x, y) -> Vector:
        """Ambient ``j(x) y`` for ``x`` in z and ``y`` in v."""
        if not self.q:
            return zero_vec(self.m.dim)
        return self.v_basis @ (self.j_of(x) @ coordinates(self.v_basis, y))

    def bracket_z(self, a: int, b: int) -> Vector:
        """z-coordinates of ``[v_a, v_b]``."""
        return coordinates(self.z_basis, self.m.bracket(self.v_basis.column(a), self.v_basis.column(b)))


def center_splitting(m: MetricNilLieAlgebra) -> CenterSplitting:
    m.alg.require_two_step()
    center = structure_report(m.alg).center_basis
    form_z = m.metric.restrict(center)
    if not form_z.is_nondegenerate():
        raise DegenerateCenter(
            "metric restricted to the center is degenerate; use witt_decompose instead"
        )
    v_basis = orthogonal_complement(m.metric, center)
    gram_v = m.metric.restrict(v_basis).gram
    q = v_basis.ncols
    j_ops = []
    if q:
        gv_inv = gram_v.inverse()
        for i in range(center.ncols):
            zi = center.column(i)
            b = RatMatrix(
                [[m.pair(m.bracket(v_basis.column(a), v_basis.column(c)), zi) for c in range(q)] for a in range(q)],
                q,
            )
            j_ops.append(-(gv_inv @ b))
    else:
        j_ops = [RatMatrix.zeros(0, 0) for _ in range(center.ncols)]
    for i, op in enumerate(j_ops):
        if q and not (gram_v @ op + op.T @ gram_v).is_zero():
            raise InternalInconsistency(f"j(z_{i + 1}) is not skew-adjoint")
    if q:
        flat = RatMatrix([op.flatten() for op in j_ops], q * q)
        injective = flat.rank() == len(j_ops)
    else:
        injective = center.ncols == 0
    split = CenterSplitting(
        m=m,
        z_basis=center,
        v_basis=v_basis,
        gram_z=form_z.gram,
        gram_v=gram_v,
        j_ops=tuple(j_ops),
        j_injective=injective,
    )
    _check_defining_identity(split)
    return split


def _check_defining_identity(split: CenterSplitting) -> None:
    m = split.m
    for i in range(split.p):
        zi = split.z_basis.column(i)
        for a in range(split.q):
            va = split.v_basis.column(a)
            for b in range(split.q):
                vb = split.v_basis.column(b)
                lhs = m.pair(m.bracket(va, vb), zi)
                rhs = m.pair(split.j_apply(zi, va), vb)
                if lhs != rhs:
                    raise InternalInconsistency("<[u,w], x> != <j(x)u, w>")


def structure_endomorphisms(m: MetricNilLieAlgebra, center_basis: RatMatrix | None = None) -> list[RatMatrix]:
    """``J_i`` on all of ``n`` with ``[u, w] = sum_i <J_i u, w> e_i``.

    ``center_basis`` defaults to the RREF basis of the center; any basis of
    a central subspace containing the commutator works.  The center may be
    degenerate.
    """
    n = m.dim
    if center_basis is None:
        center_basis = structure_report(m.alg).center_basis
    p = center_basis.ncols
    omegas = [[[Fraction(0)] * n for _ in range(n)] for _ in range(p)]
    for a in range(n):
        for b in range(n):
            br = tuple(m.alg.c[a][b])
            if is_zero_vec(br):
                continue
            co = coordinates(center_basis, br)
            for i in range(p):
                omegas[i][a][b] = co[i]
    js = [-(m.gram_inv @ RatMatrix(om, n)) for om in omegas]
    for a in range(n):
        for b in range(n):
            rebuilt = zero_vec(n)
            for i, J in enumerate(js):
                coef = m.pair(J @ unit_vec(n, a), unit_vec(n, b))
                if coef:
                    rebuilt = vadd(rebuilt, vscale(coef, center_basis.column(i)))
            if rebuilt != tuple(m.alg.c[a][b]):
                raise InternalInconsistency("structure endomorphisms do not reproduce the bracket")
    for J in js:
        for k in range(p):
            if not is_zero_vec(J @ center_basis.column(k)):
                raise InternalInconsistency("center is not in the kernel of a structure endomorphism")
    return js


# --------------------------------------------------------------------------
# closed forms available with a nondegenerate center


def connection_case_table(split: CenterSplitting, x, y) -> Vector:
    """``nabla_x y`` assembled from the v/z case formulas."""
    m = split.m
    xz, xv = split.z_part(x), split.v_part(x)
    yz, yv = split.z_part(y), split.v_part(y)
    out = vscale(Fraction(1, 2), m.bracket(xv, yv))
    out = vsub(out, vscale(Fraction(1, 2), split.j_apply(yz, xv)))
    out = vsub(out, vscale(Fraction(1, 2), split.j_apply(xz, yv)))
    return out


def _curv_pure(split: CenterSplitting, kinds: str, x, y, z) -> Vector:
    """Case formula for ``R(x, y) z`` with each argument purely in z or v.

    ``kinds`` spells the parts, e.g. "vvz" means x, y in v and z central.
    """
    m = split.m
    q = Fraction(1, 4)
    h = Fraction(1, 2)
    j = split.j_apply
    br = m.bracket
    if kinds == "vvv":
        out = vscale(h, j(br(x, y), z))
        out = vsub(out, vscale(q, j(br(y, z), x)))
        return vadd(out, vscale(q, j(br(x, z), y)))
    if kinds == "vvz":
        return vadd(vscale(-q, br(x, j(z, y))), vscale(q, br(y, j(z, x))))
    if kinds == "vzv":
        return vscale(-q, br(x, j(y, z)))
    if kinds == "vzz":
        return vscale(-q, j(y, j(z, x)))
    if kinds == "zzv":
        return vscale(q, vsub(j(x, j(y, z)), j(y, j(x, z))))
    if kinds == "zzz":
        return zero_vec(m.dim)
    if kinds[:2] in ("zv",):
        return vscale(-1, _curv_pure(split, "vz" + kinds[2], y, x, z))
    raise ValueError(kinds)


def curvature_case_table(split: CenterSplitting, x, y, z) -> Vector:
    """``R(x, y) z`` by trilinear expansion over the z/v parts."""
    parts = [
        {"z": split.z_part(w), "v": split.v_part(w)} for w in (x, y, z)
    ]
    out = zero_vec(split.m.dim)
    for a in "zv":
        for b in "zv":
            for c in "zv":
                args = (parts[0][a], parts[1][b], parts[2][c])
                if any(is_zero_vec(t) for t in args):
                    continue
                out = vadd(out, _curv_pure(split, a + b + c, *args))
    return out


def sectional_case_table(split: CenterSplitting, x, y) -> Fraction:
    """Sectional curvature of an orthogonal pair with each vector in z or v.

    For orthonormal pairs this is the familiar table with signs
    ``eps = <x, x>``; dividing by ``<x, x><y, y>`` extends it to any
    orthogonal non-null pair.
    """
    m = split.m
    x, y = vec(x), vec(y)
    if m.pair(x, y) != 0:
        raise ValueError("pair must be orthogonal")
    nx, ny = m.pair(x, x), m.pair(y, y)
    if nx == 0 or ny == 0:
        raise DegeneratePlane("null vector in the pair", witness=(x, y))
    in_z = [is_zero_vec(split.v_part(w)) for w in (x, y)]
    in_v = [is_zero_vec(split.z_part(w)) for w in (x, y)]
    if all(in_z):
        return Fraction(0)
    if all(in_v):
        b = m.bracket(x, y)
        return Fraction(-3, 4) * m.pair(b, b) / (nx * ny)
    if in_z[0] and in_v[1]:
        x, y = y, x
    elif not (in_v[0] and in_z[1]):
        raise ValueError("each vector must lie in z or in v")
    jx = split.j_apply(y, x)
    return Fraction(1, 4) * m.pair(jx, jx) / (nx * ny)


# --------------------------------------------------------------------------
# Ricci


@dataclass(frozen=True)
class RicciResult:
    form: RatMatrix  # Ric(e_a, e_b)
    transformation: RatMatrix  # T with <T x, y> = Ric(x, y)
    cross_checked: bool


def ricci_trace(m: MetricNilLieAlgebra) -> RatMatrix:
    """``Ric(x, y) = trace(w -> R(w, x) y)`` on basis pairs."""
    n = m.dim
    ops = m.basis_curvature
    return RatMatrix(
        [[sum((ops[(k, a)][k, b] for k in range(n)), Fraction(0)) for b in range(n)] for a in range(n)],
        n,
    )


def _adapted_to_ambient(split: CenterSplitting, adapted: RatMatrix) -> RatMatrix:
    inv = split._adapted_inv
    return inv.T @ adapted @ inv


def ricci_block_formulas(split: CenterSplitting) -> RatMatrix:
    """Ric from the z/v block formulas, returned in ambient coordinates.

    Uses exact orthogonal (not necessarily normalized) bases ``{z_i}`` of z
    and ``{v_k}`` of v, weighting each term by ``1/<z_i, z_i>`` or
    ``1/<v_k, v_k>``; for orthonormal bases the weights are the signs.
    """
    m = split.m
    p, q = split.p, split.q
    zo = split.z_basis @ orthogonal_basis(SymmetricForm(split.gram_z)) if p else split.z_basis
    vo = split.v_basis @ orthogonal_basis(SymmetricForm(split.gram_v)) if q else split.v_basis
    zs, vs = zo.columns(), vo.columns()
    n = m.dim
    adapted = [[Fraction(0)] * n for _ in range(n)]
    basis = split.adapted_basis.columns()
    for a in range(n):
        for b in range(n):
            x, y = basis[a], basis[b]
            if a >= p and b >= p:
                total = Fraction(0)
                for zi in zs:
                    j2x = split.j_apply(zi, split.j_apply(zi, x))
                    total += m.pair(j2x, y) / m.pair(zi, zi)
                adapted[a][b] = total / 2
            elif a < p and b < p:
                total = Fraction(0)
                for vk in vs:
                    w = split.j_apply(x, split.j_apply(y, vk))
                    total += m.pair(w, vk) / m.pair(vk, vk)
                adapted[a][b] = -total / 4
    return _adapted_to_ambient(split, RatMatrix(adapted, n))


def ricci_transformation_blocks(split: CenterSplitting) -> RatMatrix:
    """``T`` from the block formulas: on v, ``1/2 sum eps_i j(z_i)^2``; on z,
    ``x -> 1/4 sum eps_k [v_k, j(x) v_k]`` (orthogonal bases, weights as in
    :func:`ricci_block_formulas`).  Returned as an ambient matrix."""
    m = split.m
    p, q = split.p, split.q
    zo = split.z_basis @ orthogonal_basis(SymmetricForm(split.gram_z)) if p else split.z_basis
    vo = split.v_basis @ orthogonal_basis(SymmetricForm(split.gram_v)) if q else split.v_basis
    basis = split.adapted_basis.columns()
    images = []
    for a, x in enumerate(basis):
        if a < p:
            img = zero_vec(m.dim)
            for vk in vo.columns():
                term = m.bracket(vk, split.j_apply(x, vk))
                img = vadd(img, vscale(1 / m.pair(vk, vk), term))
            images.append(vscale(Fraction(1, 4), img))
        else:
            img = zero_vec(m.dim)
            for zi in zo.columns():
                term = split.j_apply(zi, split.j_apply(zi, x))
                img = vadd(img, vscale(1 / m.pair(zi, zi), term))
            images.append(vscale(Fraction(1, 2), img))
    t_adapted_cols = RatMatrix.from_columns(images, m.dim)
    return t_adapted_cols @ split._adapted_inv


def ricci(m: MetricNilLieAlgebra) -> RicciResult:
    """Ricci form by the trace definition, plus its transformation.

    When the center is nondegenerate (and the algebra 2-step) the block
    formulas are evaluated too and must agree exactly.
    """
    ric = ricci_trace(m)
    if not ric.is_symmetric():
        raise InternalInconsistency("Ricci form is not symmetric")
    t = m.gram_inv @ ric
    checked = False
    if m.alg.is_two_step:
        try:
            split = center_splitting(m)
        except DegenerateCenter:
            split = None
        if split is not None:
            if ricci_block_formulas(split) != ric:
                raise InternalInconsistency("Ricci block formulas disagree with the trace")
            if ricci_transformation_blocks(split) != t:
                raise InternalInconsistency("Ricci transformation blocks disagree")
            checked = True
    return RicciResult(form=ric, transformation=t, cross_checked=checked)


# --------------------------------------------------------------------------
# geodesics


@dataclass(frozen=True)
class GeodesicSample:
    t: float
    position: np.ndarray  # exponential coordinates, ambient basis
    z: np.ndarray  # z(t) in z_basis coordinates
    v: np.ndarray  # v(t) in v_basis coordinates
    velocity: np.ndarray  # left-trivialized, ambient basis
    residual: float


def _adaptive_simpson(f, a, b, tol, max_depth: int = 30) -> np.ndarray:
    """Adaptive Simpson on many intervals at once.

    ``a``, ``b`` and ``tol`` are 1-d arrays with one entry per interval and
    ``f`` maps a 1-d array of nodes to an ``(nodes, p)`` array.  Refinement is
    breadth-first, so every level costs one batched call to ``f``; the
    accept/split rule per subinterval is the usual one (``|S2 - S1| <= 15 tol``
    with ``tol`` halved on each split, Richardson-corrected sum).  ``tol`` is
    absolute but never below a relative floor of ``1e-15 * |f| * |b - a|``,
    so exponentially growing integrands (hyperbolic j) still terminate.
    Returns an ``(intervals, p)`` array.
    """
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    tol = np.asarray(tol, dtype=float)
    n = a.size
    mid = 0.5 * (a + b)
    vals = f(np.concatenate([a, mid, b]))
    fa, fm, fb = vals[:n], vals[n:2 * n], vals[2 * n:]
    whole = ((b - a) / 6.0)[:, None] * (fa + 4 * fm + fb)
    scale = np.max(np.abs(np.concatenate([fa, fm, fb], axis=1)), axis=1, initial=0.0)
    tol = np.maximum(tol, 1e-15 * scale * np.abs(b - a))
    total = np.zeros_like(whole)
    owner = np.arange(n)
    depth = 0
    while owner.size:
        m = 0.5 * (a + b)
        k = a.size
        quarter = f(np.concatenate([0.5 * (a + m), 0.5 * (m + b)]))
        flm, frm = quarter[:k], quarter[k:]
        left = ((m - a) / 6.0)[:, None] * (fa + 4 * flm + fm)
        right = ((b - m) / 6.0)[:, None] * (fm + 4 * frm + fb)
        err = left + right - whole
        # the integrand comes from expm, accurate to ~1e-13 relative; asking
        # for less noise than that never converges
        floor = 1e-12 * np.max(np.abs(left) + np.abs(right), axis=1, initial=0.0)
        done = np.max(np.abs(err), axis=1, initial=0.0) <= 15 * np.maximum(tol, floor)
        if depth >= max_depth:
            done[:] = True
        np.add.at(total, owner[done], (left + right + err / 15.0)[done])
        keep = ~done
        a, b, m = a[keep], b[keep], m[keep]
        fa, fm, fb, flm, frm = fa[keep], fm[keep], fb[keep], flm[keep], frm[keep]
        owner = np.concatenate([owner[keep], owner[keep]])
        a, b = np.concatenate([a, m]), np.concatenate([m, b])
        fa, fm, fb = np.concatenate([fa, fm]), np.concatenate([flm, frm]), np.concatenate([fm, fb])
        whole = np.concatenate([left[keep], right[keep]])
        tol = np.concatenate([tol[keep], tol[keep]]) / 2
        depth += 1
    return total


class _GeodesicSystem:
    """Float data for one geodesic through the identity."""

    def __init__(self, split: CenterSplitting, z0, v0):
        m = split.m
        self.split = split
        self.p, self.q = split.p, split.q
        z0 = np.asarray([float(x) for x in z0])
        v0 = np.asarray([float(x) for x in v0])
        zb = split.z_basis.to_numpy().reshape(m.dim, self.p)
        vb = split.v_basis.to_numpy().reshape(m.dim, self.q)
        self.zb, self.vb = zb, vb
        self.zeta0 = _lstsq_coords(zb, z0, "z0 must be central")
        self.nu0 = _lstsq_coords(vb, v0, "v0 must lie in v = z^perp")
        js = [op.to_numpy().reshape(self.q, self.q) for op in split.j_ops]
        self.jz0 = sum((c * jm for c, jm in zip(self.zeta0, js)), np.zeros((self.q, self.q)))
        bz = np.zeros((self.p, self.q, self.q))
        for a in range(self.q):
            for b in range(a + 1, self.q):
                co = np.array([float(x) for x in split.bracket_z(a, b)])
                bz[:, a, b] = co
                bz[:, b, a] = -co
        self.bz = bz

    def v_and_velocity(self, ts) -> tuple[np.ndarray, np.ndarray]:
        """``v(t)`` and ``v'(t)`` (v_basis coordinates) for a 1-d array of times."""
        ts = np.asarray(ts, dtype=float)
        if self.q == 0:
            empty = np.zeros((ts.size, 0))
            return empty, empty
        e, phi = mat_exp_phi(self.jz0, ts)
        return phi @ self.nu0, e @ self.nu0

    def bracket(self, u, w):
        """z-coordinates of ``[u, w]`` for stacked v-vectors ``u``, ``w``."""
        return np.einsum("iab,...a,...b->...i", self.bz, u, w)

    def integrand(self, s):
        pos, vel = self.v_and_velocity(s)
        return self.bracket(vel, pos)

    def z_increments(self, a, b, tol) -> np.ndarray:
        """``-1/2 int_a^b [v'(s), v(s)] ds`` per interval, in z coordinates (``t z0`` excluded)."""
        a = np.asarray(a, dtype=float)
        if a.size == 0 or self.p == 0:
            return np.zeros((a.size, self.p))
        return -0.5 * _adaptive_simpson(self.integrand, a, b, tol)

    def z_closed_form(self, t: float) -> np.ndarray:
        """Same quantity from 0 to t via one block exponential.

        With ``w(s) = (v'(s), v(s)) = exp(sK) w0`` the Gram integral
        ``int_0^t w w^T ds`` is read off ``exp(t [[-K, w0 w0^T], [0, K^T]])``.
        """
        q = self.q
        if self.p == 0:
            return np.zeros(0)
        k = np.zeros((2 * q, 2 * q))
        k[:q, :q] = self.jz0
        k[q:, :q] = np.eye(q)
        w0 = np.concatenate([self.nu0, np.zeros(q)])
        big = np.zeros((4 * q, 4 * q))
        big[: 2 * q, : 2 * q] = -k
        big[: 2 * q, 2 * q:] = np.outer(w0, w0)
        big[2 * q:, 2 * q:] = k.T
        f = scipy.linalg.expm(t * big)
        gram = f[2 * q:, 2 * q:].T @ f[: 2 * q, 2 * q:]
        cross = gram[:q, q:]  # int v'(s) v(s)^T ds
        return t * self.zeta0 - 0.5 * np.einsum("iab,ab->i", self.bz, cross)


def _lstsq_coords(basis: np.ndarray, x: np.ndarray, msg: str) -> np.ndarray:
    if basis.shape[1] == 0:
        if np.any(np.abs(x) > 1e-12):
            raise ValueError(msg)
        return np.zeros(0)
    c, *_ = np.linalg.lstsq(basis, x, rcond=None)
    if np.max(np.abs(basis @ c - x)) > 1e-9 * max(1.0, np.max(np.abs(x))):
        raise ValueError(msg)
    return c


def _simpson_z(sysm: _GeodesicSystem, ts: list[float], quad_tol: float) -> dict[float, np.ndarray]:
    """``z(t)`` at every grid time by integrating between consecutive times.

    The absolute tolerance ``quad_tol`` is shared among the intervals in
    proportion to their length, on each side of ``t = 0``.
    """
    span = max((abs(t) for t in ts), default=1.0) or 1.0
    out = {0.0: np.zeros(sysm.p)}
    for sign in (1, -1):
        pts = sorted({t for t in ts if t * sign > 0}, key=abs)
        if not pts:
            continue
        ends = np.array(pts)
        starts = np.concatenate([[0.0], ends[:-1]])
        incs = sysm.z_increments(starts, ends, quad_tol * np.abs(ends - starts) / span)
        for t, z in zip(pts, np.cumsum(incs, axis=0)):
            out[t] = t * sysm.zeta0 + z
    return out


def geodesic(
    m: MetricNilLieAlgebra,
    z0,
    v0,
    t_grid: Sequence[float],
    quad_tol: float = 1e-10,
    method: str = "simpson",
    fd_step: float = 1e-3,
) -> list[GeodesicSample]:
    """Sample the geodesic through the identity with ``gamma'(0) = z0 + v0``.

    ``z0`` (central) and ``v0`` (in ``z^perp``) are ambient vectors.  In
    exponential coordinates ``v(t) = Phi(t) v0`` with
    ``Phi(t) = int_0^t exp(s j(z0)) ds`` and
    ``z(t) = t z0 - 1/2 int_0^t [v'(s), v(s)] ds``; the integral is done by
    adaptive Simpson (``method="simpson"``) or by a block exponential
    (``method="closed_form"``).  Each sample's ``residual`` comes from an
    independent finite-difference evaluation of the geodesic equations.
    """
    split = center_splitting(m)
    sysm = _GeodesicSystem(split, z0, v0)
    ts = [float(t) for t in t_grid]
    if method == "simpson":
        table = _simpson_z(sysm, ts, quad_tol)
        zs = [table[t] for t in ts]
    elif method == "closed_form":
        zs = [sysm.z_closed_form(t) for t in ts]
    else:
        raise ValueError(f"unknown method {method!r}")
    if not ts:
        return []
    vpos, vvel = sysm.v_and_velocity(ts)
    residuals = _residuals(sysm, np.array(ts), np.array(zs).reshape(len(ts), sysm.p), fd_step)
    samples = []
    for i, t in enumerate(ts):
        vel = sysm.zb @ sysm.zeta0 + sysm.vb @ vvel[i]
        pos = sysm.zb @ zs[i] + sysm.vb @ vpos[i]
        samples.append(
            GeodesicSample(t=t, position=pos, z=zs[i], v=vpos[i], velocity=vel, residual=float(residuals[i]))
        )
    return samples


_FD5 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_OFFSETS = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])


def _residuals(sysm: _GeodesicSystem, ts: np.ndarray, zc: np.ndarray, h: float = 1e-3) -> np.ndarray:
    """Max-norm residual of ``v'' = j(z0) v'`` and ``z' + 1/2 [v', v] = z0`` per sample.

    Derivatives are 5-point central differences of the sampled position
    ``v(.)``, velocity ``v'(.)`` and ``z(.)`` (the latter re-integrated over
    the short stencil intervals), so the check does not reuse the closed
    forms it is testing.
    """
    n = ts.size
    nodes = ts[:, None] + h * _OFFSETS[None, :]
    vpos, vvel = sysm.v_and_velocity(nodes.ravel())
    vpos = vpos.reshape(n, 5, sysm.q)
    vvel = vvel.reshape(n, 5, sysm.q)
    dv = np.einsum("k,nkq->nq", _FD5, vpos) / h
    ddv = np.einsum("k,nkq->nq", _FD5, vvel) / h
    r1 = np.max(np.abs(ddv - dv @ sysm.jz0.T), axis=1, initial=0.0)
    r3 = np.max(np.abs(dv - vvel[:, 2]), axis=1, initial=0.0)
    if not sysm.p:
        return np.maximum(r1, r3)
    # z at t +- h and t +- 2h from four short integrals per sample
    starts = np.concatenate([ts, ts + h, ts, ts - h])
    ends = np.concatenate([ts + h, ts + 2 * h, ts - h, ts - 2 * h])
    inc = sysm.z_increments(starts, ends, np.full(starts.size, 1e-12)).reshape(4, n, sysm.p)
    zs = np.empty((n, 5, sysm.p))
    zs[:, 2] = zc
    zs[:, 3] = zc + inc[0]
    zs[:, 4] = zs[:, 3] + inc[1]
    zs[:, 1] = zc + inc[2]
    zs[:, 0] = zs[:, 1] + inc[3]
    zs += (h * _OFFSETS)[None, :, None] * sysm.zeta0
    dz = np.einsum("k,nkp->np", _FD5, zs) / h
    r2 = np.max(np.abs(dz + 0.5 * sysm.bracket(dv, vpos[:, 2]) - sysm.zeta0), axis=1)
    return np.maximum(np.maximum(r1, r3), r2)


def speed_squared(m: MetricNilLieAlgebra, velocity: np.ndarray) -> float:
    g = m.gram.to_numpy()
    return float(velocity @ g @ velocity)
