"""Builders for example families of metric 2-step nilpotent Lie algebras.

Ordering conventions (fixed, relied on by tests and the CLI):

* data-set constructions put the ``V`` basis first and the ``g`` basis last,
  so the rotation data set on ``R^2`` gives ``h3`` in its usual order;
* the cotangent double lists the dual basis first, then the original basis;
* the modified cotangent lists ``V*`` first, then ``V``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .errors import (
    AdInvarianceViolation,
    InternalInconsistency,
    InvalidDataSet,
    InvalidShape,
    NotFaithful,
    NotHomomorphism,
    NotSkewAdjoint,
    RepNotSkewAdjoint,
    RhoNotInjective,
    RhoNotSkew,
    RhoUUNonzero,
    SingularT,
    TrivialSubrep,
    UnknownExample,
)
from .exactlin import (
    RatMatrix,
    SymmetricForm,
    block_diag,
    is_zero_vec,
    rat,
    unit_vec,
    vadd,
    vscale,
)
from .metgeo import MetricNilLieAlgebra, center_splitting
from .nilalg import NilLieAlgebra, abelian, direct_sum, from_structure_constants, structure_report


def _as_matrix(m) -> RatMatrix:
    return m if isinstance(m, RatMatrix) else RatMatrix(m)


def _as_form(f) -> SymmetricForm:
    if isinstance(f, SymmetricForm):
        return f
    return SymmetricForm(_as_matrix(f))


def _same_span(a: RatMatrix, b: RatMatrix) -> bool:
    return a.ncols == b.ncols == a.hstack(b).rank()


def _skew_for(gram: RatMatrix, op: RatMatrix) -> bool:
    return (gram @ op + op.T @ gram).is_zero()


# --------------------------------------------------------------------------
# data sets


@dataclass(frozen=True, eq=False)
class DataSet:
    """A Lie algebra ``g`` with an invariant metric acting on a metric space ``V``.

    ``rep[i]`` is the matrix of ``pi(x_i)`` for the i-th basis vector of ``g``.
    Construction does not validate; call :func:`validate_data_set` (or
    :func:`from_data_set`, which does it for you).
    """

    g: NilLieAlgebra
    metric_g: SymmetricForm
    rep: tuple
    metric_V: SymmetricForm
    name: str = ""
    v_names: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "rep", tuple(_as_matrix(r) for r in self.rep))
        object.__setattr__(self, "metric_g", _as_form(self.metric_g))
        object.__setattr__(self, "metric_V", _as_form(self.metric_V))
        if not self.v_names:
            object.__setattr__(self, "v_names", tuple(f"v{i + 1}" for i in range(self.dim_V)))

    @property
    def dim_g(self) -> int:
        return self.g.dim

    @property
    def dim_V(self) -> int:
        return self.metric_V.dim

    def pi(self, x: Sequence) -> RatMatrix:
        out = RatMatrix.zeros(self.dim_V, self.dim_V)
        for c, op in zip(x, self.rep):
            c = rat(c)
            if c:
                out = out + op * c
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, DataSet):
            return NotImplemented
        return (
            self.g == other.g
            and self.metric_g == other.metric_g
            and self.rep == other.rep
            and self.metric_V == other.metric_V
        )

    __hash__ = None


def ad_invariance_witness(alg: NilLieAlgebra, form: SymmetricForm):
    """First basis triple ``(i, j, k)`` with ``<[x,y],z> + <y,[x,z]> != 0``, else None."""
    n = alg.dim
    for i in range(n):
        for j in range(n):
            bij = alg.c[i][j]
            for k in range(n):
                lhs = form.pair(bij, unit_vec(n, k)) + form.pair(unit_vec(n, j), alg.c[i][k])
                if lhs != 0:
                    return (i, j, k)
    return None


def data_set_violations(d: DataSet) -> list[InvalidDataSet]:
    """Every failing data-set invariant, one exception object each."""
    problems: list[InvalidDataSet] = []
    g, q = d.g, d.dim_V
    if d.metric_g.dim != g.dim:
        raise InvalidShape("metric_g has the wrong size")
    if len(d.rep) != g.dim:
        raise InvalidShape("rep needs one matrix per basis vector of g")
    for r in d.rep:
        if r.shape != (q, q):
            raise InvalidShape("rep matrices must be square of size dim V")
    if not d.metric_g.is_nondegenerate():
        problems.append(AdInvarianceViolation("metric on g is degenerate"))
    w = ad_invariance_witness(g, d.metric_g)
    if w is not None:
        problems.append(AdInvarianceViolation("metric on g is not ad-invariant", witness=w))
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            if d.rep[i].commutator(d.rep[j]) != d.pi(g.c[i][j]):
                problems.append(
                    NotHomomorphism("[pi(x_i), pi(x_j)] != pi([x_i, x_j])", witness=(i, j))
                )
                break
        else:
            continue
        break
    if g.dim:
        flat = RatMatrix([r.flatten() for r in d.rep], q * q) if q else RatMatrix.zeros(g.dim, 0)
        kernel = flat.T.nullspace() if q else RatMatrix.identity(g.dim)
        if kernel.ncols:
            problems.append(NotFaithful("pi has a nonzero kernel", witness=kernel.column(0)))
    if q:
        stacked = RatMatrix.zeros(0, q)
        for r in d.rep:
            stacked = stacked.vstack(r)
        fixed = stacked.nullspace()
        if fixed.ncols:
            problems.append(TrivialSubrep("common kernel of pi is nonzero", witness=fixed.column(0)))
    if not d.metric_V.is_nondegenerate():
        problems.append(RepNotSkewAdjoint("metric on V is degenerate"))
    for i, r in enumerate(d.rep):
        if not _skew_for(d.metric_V.gram, r):
            problems.append(RepNotSkewAdjoint(f"pi(x_{i + 1}) is not skew-adjoint", witness=i))
            break
    return problems


def validate_data_set(d: DataSet) -> None:
    """Raise if any invariant fails.

    A single failure raises its own class; several are bundled in one
    :class:`InvalidDataSet` whose ``violations`` lists them all.
    """
    problems = data_set_violations(d)
    if len(problems) == 1:
        raise problems[0]
    if problems:
        names = ", ".join(sorted({type(p).__name__ for p in problems}))
        raise InvalidDataSet(f"data set fails: {names}", violations=problems)


def from_j_maps(
    metric_z,
    metric_v,
    j_list: Sequence,
    z_names: Sequence[str] | None = None,
    v_names: Sequence[str] | None = None,
    name: str = "",
) -> MetricNilLieAlgebra:
    """The metric algebra on ``v + z`` whose j-maps are the given matrices.

    ``j_list[i]`` becomes ``j(z_i)``; the bracket is the exact solution of
    ``<[u, w], z_i> = <j(z_i) u, w>``.  Basis order is v first, then z.
    """
    gz, gv = _as_form(metric_z), _as_form(metric_v)
    js = [_as_matrix(j) for j in j_list]
    p, q = gz.dim, gv.dim
    if len(js) != p:
        raise InvalidShape("need one j-matrix per basis vector of z")
    for i, j in enumerate(js):
        if j.shape != (q, q):
            raise InvalidShape("j-matrices must be square of size dim v")
        if not _skew_for(gv.gram, j):
            raise NotSkewAdjoint(f"j(z_{i + 1}) is not skew-adjoint", witness=i)
    gz_inv = gz.gram.inverse()
    n = q + p
    brackets = []
    for a in range(q):
        for b in range(a + 1, q):
            rhs = [gv.pair(js[i] @ unit_vec(q, a), unit_vec(q, b)) for i in range(p)]
            coeff = gz_inv @ tuple(rhs)
            if not is_zero_vec(coeff):
                brackets.append((a, b, [Fraction(0)] * q + list(coeff)))
    names = None
    if z_names or v_names:
        names = tuple(v_names or (f"v{i + 1}" for i in range(q))) + tuple(
            z_names or (f"z{i + 1}" for i in range(p))
        )
    alg = from_structure_constants(n, brackets, names)
    return MetricNilLieAlgebra(alg, SymmetricForm(block_diag(gv.gram, gz.gram)), name)


def from_data_set(d: DataSet) -> MetricNilLieAlgebra:
    """Two-step algebra ``n = V + g`` with ``[g, n] = 0`` built from a data set.

    Post-conditions (center = commutator = g, recovered j = pi) are checked
    exactly and a failure raises :class:`InternalInconsistency`.
    """
    validate_data_set(d)
    m = from_j_maps(d.metric_g, d.metric_V, d.rep, d.g.basis_names, d.v_names, d.name)
    q, p = d.dim_V, d.dim_g
    rep_ = structure_report(m.alg)
    g_block = RatMatrix.from_columns([unit_vec(q + p, q + i) for i in range(p)], q + p)
    if not (_same_span(rep_.center_basis, g_block) and _same_span(rep_.commutator_basis, g_block)):
        raise InternalInconsistency("center or commutator differs from g")
    split = center_splitting(m)
    if split.j_ops != d.rep:
        raise InternalInconsistency("recovered j-maps differ from pi")
    return m


# --------------------------------------------------------------------------
# Heisenberg metrics, sign flip, products


def heisenberg(n: int, B, t, lam) -> MetricNilLieAlgebra:
    """``h_{2n+1}`` with ``<z,z> = lam`` and ``<[u,w], z> = B(t u, w)``.

    Basis ``u_1..u_{2n}, z``.
    """
    B, t, lam = _as_form(B), _as_matrix(t), rat(lam)
    if B.dim != 2 * n or t.shape != (2 * n, 2 * n):
        raise InvalidShape("B and t must act on R^{2n}")
    if lam == 0:
        raise InvalidShape("lambda must be nonzero")
    if not B.is_nondegenerate():
        raise InvalidShape("B must be nondegenerate")
    if not _skew_for(B.gram, t):
        raise NotSkewAdjoint("t is not skew-adjoint for B")
    if t.det() == 0:
        raise SingularT("t is singular", witness=t.nullspace().column(0))
    names = [f"u{i + 1}" for i in range(2 * n)]
    m = from_j_maps([[lam]], B, [t], ["z"], names, name=f"heisenberg_{2 * n + 1}")
    r = structure_report(m.alg)
    if r.center_dim != 1 or r.commutator_dim != 1:
        raise InternalInconsistency("heisenberg output is not a Heisenberg algebra")
    return m


def flip_center_sign(m: MetricNilLieAlgebra) -> MetricNilLieAlgebra:
    """Negate the metric on the center, keep it on ``v = z^perp``."""
    split = center_splitting(m)
    p = split.p
    inv = split._adapted_inv
    # projection onto z along v, in ambient coordinates
    proj = split.z_basis @ RatMatrix(inv.rows[:p], m.dim) if p else RatMatrix.zeros(m.dim, m.dim)
    new_gram = m.gram - (proj.T @ m.gram @ proj) * 2
    out = MetricNilLieAlgebra(m.alg, SymmetricForm(new_gram), m.name + "_flipped" if m.name else "")
    new_split = center_splitting(out)
    if new_split.v_basis != split.v_basis or tuple(-j for j in split.j_ops) != new_split.j_ops:
        raise InternalInconsistency("flipped metric does not negate j")
    return out


def orthogonal_product(a: MetricNilLieAlgebra, b: MetricNilLieAlgebra, name: str = "") -> MetricNilLieAlgebra:
    """``a x b`` with block-diagonal metric, basis of ``a`` first."""
    alg = direct_sum(a.alg, b.alg)
    return MetricNilLieAlgebra(alg, SymmetricForm(block_diag(a.gram, b.gram)), name)


def euclidean_factor(k: int, m: MetricNilLieAlgebra, signs: Sequence | None = None) -> MetricNilLieAlgebra:
    """``R^k x m`` where ``R^k`` is abelian with metric ``diag(signs)`` (default identity)."""
    signs = signs if signs is not None else [1] * k
    flat = MetricNilLieAlgebra(abelian(k), SymmetricForm.diag(signs))
    return orthogonal_product(flat, m, name=f"R{k}_x_{m.name}" if m.name else "")


def change_basis(m: MetricNilLieAlgebra, P, names: Sequence[str] | None = None, name: str = "") -> MetricNilLieAlgebra:
    """Re-express ``m`` in the basis given by the columns of ``P``."""
    P = _as_matrix(P)
    if P.shape != (m.dim, m.dim) or P.det() == 0:
        raise InvalidShape("change of basis must be invertible")
    Pinv = P.inverse()
    n = m.dim
    brackets = []
    for a in range(n):
        for b in range(a + 1, n):
            br = m.bracket(P.column(a), P.column(b))
            if not is_zero_vec(br):
                brackets.append((a, b, list(Pinv @ br)))
    alg = from_structure_constants(n, brackets, names, require_nilpotent=m.alg.is_nilpotent)
    return MetricNilLieAlgebra(alg, SymmetricForm(P.T @ m.gram @ P), name or m.name)


# --------------------------------------------------------------------------
# cotangent doubles


def cotangent_double(alg: NilLieAlgebra, name: str = "") -> MetricNilLieAlgebra:
    """``n x n*`` with the coadjoint action and the neutral pairing metric.

    Basis: ``e^1..e^n`` (dual) then ``e_1..e_n``.  Brackets:
    ``[e_i, e_j] = sum_k c_ij^k e_k`` and ``[e_i, e^j] = sum_k -c_ik^j e^k``.
    """
    alg.require_two_step()
    n = alg.dim
    N = 2 * n
    brackets = []
    for i in range(n):
        for j in range(i + 1, n):
            if any(alg.c[i][j]):
                brackets.append((n + i, n + j, [Fraction(0)] * n + list(alg.c[i][j])))
        for j in range(n):
            coeffs = [-alg.c[i][k][j] for k in range(n)]
            if any(coeffs):
                brackets.append((n + i, j, coeffs + [Fraction(0)] * n))
    names = tuple(f"{b}*" for b in alg.basis_names) + tuple(alg.basis_names)
    dual = from_structure_constants(N, brackets, names)
    gram = RatMatrix.zeros(n, n).hstack(RatMatrix.identity(n)).vstack(
        RatMatrix.identity(n).hstack(RatMatrix.zeros(n, n))
    )
    return MetricNilLieAlgebra(dual, SymmetricForm(gram), name)


def coadjoint_constants(alg: NilLieAlgebra) -> dict[tuple[int, int, int], Fraction]:
    """``d_ij^k`` read off ``cotangent_double(alg)``: ``[e_i, e^j] = sum_k d_ij^k e^k``."""
    t = cotangent_double(alg)
    n = alg.dim
    return {(i, j, k): t.alg.c[n + i][j][k] for i in range(n) for j in range(n) for k in range(n)}


# Columns express the catalog's dim-6 basis f1..f6 in the cotangent basis
# (e1*, e2*, e3*, e1, e2, e3) of h3:  f1 = e3, f2 = -e2*, f3 = e1*,
# f4 = e1, f5 = e2, f6 = e3*.
DIM6_RELABEL = RatMatrix(
    [
        [0, 0, 1, 0, 0, 0],
        [0, -1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [1, 0, 0, 0, 0, 0],
    ]
)


# --------------------------------------------------------------------------
# modified cotangent


def modified_cotangent(dim: int, inner, rho: Sequence, name: str = "") -> MetricNilLieAlgebra:
    """``V* + V`` with ``[w_a, w_b] = sum_c <rho(w_c) w_a, w_b> phi_c``.

    ``phi_c`` is the dual basis of ``w_c``; the metric pairs ``phi_c`` with
    ``w_c`` and vanishes on ``V*`` and on ``V``.
    """
    inner = _as_form(inner)
    rho = [_as_matrix(r) for r in rho]
    if inner.dim != dim or len(rho) != dim or any(r.shape != (dim, dim) for r in rho):
        raise InvalidShape("rho must be one dim x dim matrix per basis vector of V")
    for a, r in enumerate(rho):
        if not _skew_for(inner.gram, r):
            raise RhoNotSkew(f"rho(w_{a + 1}) is not skew-adjoint", witness=a)
    flat = RatMatrix([r.flatten() for r in rho], dim * dim)
    if flat.rank() != dim:
        raise RhoNotInjective("rho is not injective", witness=flat.T.nullspace().column(0))
    for a in range(dim):
        for b in range(a, dim):
            ea, eb = unit_vec(dim, a), unit_vec(dim, b)
            s = vadd(rho[a] @ eb, rho[b] @ ea)
            if a == b:
                s = rho[a] @ ea
            if not is_zero_vec(s):
                u = ea if a == b or not is_zero_vec(rho[a] @ ea) else vadd(ea, eb)
                raise RhoUUNonzero("rho(u)u is not zero", witness=u)
    N = 2 * dim
    brackets = []
    for a in range(dim):
        for b in range(a + 1, dim):
            coeffs = [inner.pair(rho[c] @ unit_vec(dim, a), unit_vec(dim, b)) for c in range(dim)]
            if any(coeffs):
                brackets.append((dim + a, dim + b, coeffs + [Fraction(0)] * dim))
    names = tuple(f"phi{i + 1}" for i in range(dim)) + tuple(f"w{i + 1}" for i in range(dim))
    alg = from_structure_constants(N, brackets, names)
    gram = RatMatrix.zeros(dim, dim).hstack(RatMatrix.identity(dim)).vstack(
        RatMatrix.identity(dim).hstack(RatMatrix.zeros(dim, dim))
    )
    m = MetricNilLieAlgebra(alg, SymmetricForm(gram), name)
    if ad_invariance_witness(alg, m.metric) is not None:
        raise InternalInconsistency("modified cotangent metric is not ad-invariant")
    return m


# --------------------------------------------------------------------------
# semisimple inputs


def killing_form(alg: NilLieAlgebra) -> SymmetricForm:
    n = alg.dim
    ads = [alg.ad_basis(i) for i in range(n)]
    return SymmetricForm(RatMatrix([[(ads[i] @ ads[j]).trace() for j in range(n)] for i in range(n)], n))


def _matrix_algebra(mats: Sequence[RatMatrix], names=None) -> NilLieAlgebra:
    """Structure constants of the span of linearly independent matrices."""
    size = mats[0].nrows
    n = len(mats)
    coords = RatMatrix.from_columns([m.flatten() for m in mats], size * size)
    brackets = []
    for a in range(n):
        for b in range(a + 1, n):
            sol = coords.solve(mats[a].commutator(mats[b]).flatten())
            if sol is None:
                raise InternalInconsistency("matrix span is not closed under the commutator")
            if not is_zero_vec(sol):
                brackets.append((a, b, list(sol)))
    return from_structure_constants(n, brackets, names, require_nilpotent=False)


def so_pq(p: int, q: int) -> tuple[NilLieAlgebra, list[RatMatrix]]:
    """``so(p, q)`` as ``{X : eta X + X^T eta = 0}``, ``eta = diag(1^p, (-1)^q)``.

    The basis is the RREF nullspace basis of the linear conditions; the
    second return value holds the basis matrices.
    """
    n = p + q
    eta = RatMatrix.diag([1] * p + [-1] * q)
    rows = []
    for r in range(n):
        for s in range(n):
            # (eta X + X^T eta)_{rs} = eta_rr X_rs + X_sr eta_ss
            row = [Fraction(0)] * (n * n)
            row[r * n + s] += eta[r, r]
            row[s * n + r] += eta[s, s]
            rows.append(row)
    null = RatMatrix(rows, n * n).nullspace()
    mats = [RatMatrix([col[i * n:(i + 1) * n] for i in range(n)], n) for col in null.columns()]
    return _matrix_algebra(mats, [f"x{i + 1}" for i in range(len(mats))]), mats


def so3() -> NilLieAlgebra:
    return so_pq(3, 0)[0]


def sl2() -> NilLieAlgebra:
    """Basis ``H, E, F`` with ``[H,E]=2E``, ``[H,F]=-2F``, ``[E,F]=H``."""
    return from_structure_constants(
        3, [(0, 1, [0, 2, 0]), (0, 2, [0, 0, -2]), (1, 2, [1, 0, 0])], ("H", "E", "F"), require_nilpotent=False
    )


def adjoint_data_set(g: NilLieAlgebra, form: SymmetricForm | None = None, name: str = "") -> DataSet:
    """``(g, K, ad, K)`` with ``K`` the Killing form unless ``form`` is given."""
    form = form if form is not None else killing_form(g)
    return DataSet(
        g=g,
        metric_g=form,
        rep=tuple(g.ad_basis(i) for i in range(g.dim)),
        metric_V=form,
        name=name,
        v_names=tuple(f"{b}'" for b in g.basis_names),
    )


def evaluation_data_set(p: int, q: int) -> DataSet:
    """``so(p, q)`` acting on ``R^{p,q}`` by evaluation, Killing metric on ``g``."""
    g, mats = so_pq(p, q)
    return DataSet(
        g=g,
        metric_g=killing_form(g),
        rep=tuple(mats),
        metric_V=SymmetricForm.diag([1] * p + [-1] * q),
        name=f"so_{p}_{q}_evaluation",
    )


def modified_tangent(g: NilLieAlgebra | None = None) -> MetricNilLieAlgebra:
    """``from_data_set`` of the adjoint data set with the Killing form (default ``sl2``)."""
    g = g if g is not None else sl2()
    return from_data_set(adjoint_data_set(g, name="modified_tangent"))


# --------------------------------------------------------------------------
# catalog


class ExampleId(str, Enum):
    h3_riemannian = "h3_riemannian"
    h3_lorentz_1 = "h3_lorentz_1"
    h3_lorentz_2 = "h3_lorentz_2"
    r_x_h3_lorentz = "r_x_h3_lorentz"
    heisenberg_2n1 = "heisenberg_2n1"
    free3step2gen = "free3step2gen"
    dim6_cotangent_h3 = "dim6_cotangent_h3"
    so3_adjoint_dataset = "so3_adjoint_dataset"
    so_pq_evaluation = "so_pq_evaluation"
    modified_tangent = "modified_tangent"


H3_BRACKETS = [(0, 1, {2: 1})]
DIM6_BRACKETS = [(3, 4, {0: 1}), (3, 5, {1: 1}), (4, 5, {2: 1})]

# Metadata attached to catalog entries (basis conventions, notes).
CATALOG_NOTES: dict[str, dict] = {
    "dim6_cotangent_h3": {
        "relabel_from_cotangent_double": "columns of DIM6_RELABEL: f1=e3, f2=-e2*, f3=e1*, f4=e1, f5=e2, f6=e3*",
        "metric_note": "<e2,e5> = -1; the all-plus pairing is not ad-invariant for these brackets",
    },
    "modified_tangent": {"g": "sl2 with Killing form; signature reported, not asserted"},
    "so_pq_evaluation": {"p": 2, "q": 1},
}


def _h3(metric, name: str) -> MetricNilLieAlgebra:
    return MetricNilLieAlgebra(from_structure_constants(3, H3_BRACKETS), SymmetricForm.diag(metric), name)


def example_catalog(example_id) -> MetricNilLieAlgebra | DataSet:
    try:
        key = ExampleId(example_id)
    except ValueError:
        raise UnknownExample(f"unknown example id {example_id!r}") from None
    if key is ExampleId.h3_riemannian:
        return _h3([1, 1, 1], key.value)
    if key is ExampleId.h3_lorentz_1:
        return _h3([1, 1, -1], key.value)
    if key is ExampleId.h3_lorentz_2:
        return _h3([-1, 1, 1], key.value)
    if key is ExampleId.r_x_h3_lorentz:
        gram = RatMatrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
        return MetricNilLieAlgebra(from_structure_constants(4, H3_BRACKETS), SymmetricForm(gram), key.value)
    if key is ExampleId.heisenberg_2n1:
        t = RatMatrix([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
        m = heisenberg(2, SymmetricForm.diag([1] * 4), t, 1)
        return MetricNilLieAlgebra(m.alg, m.metric, key.value)
    if key is ExampleId.free3step2gen:
        alg = from_structure_constants(5, [(0, 1, {2: 1}), (0, 2, {3: 1}), (1, 2, {4: 1})])
        gram = RatMatrix(
            [[0, 0, 0, 0, 1], [0, 0, 0, -1, 0], [0, 0, 1, 0, 0], [0, -1, 0, 0, 0], [1, 0, 0, 0, 0]]
        )
        return MetricNilLieAlgebra(alg, SymmetricForm(gram), key.value)
    if key is ExampleId.dim6_cotangent_h3:
        alg = from_structure_constants(6, DIM6_BRACKETS)
        return MetricNilLieAlgebra(alg, SymmetricForm(dim6_gram(sign_25=-1)), key.value)
    if key is ExampleId.so3_adjoint_dataset:
        d = adjoint_data_set(so3(), name=key.value)
        validate_data_set(d)
        return d
    if key is ExampleId.so_pq_evaluation:
        d = evaluation_data_set(2, 1)
        validate_data_set(d)
        return d
    return modified_tangent()


def dim6_gram(sign_25: int = -1) -> RatMatrix:
    """Gram matrix pairing e1-e6, e2-e5, e3-e4; ``sign_25`` is the e2-e5 entry."""
    rows = [[0] * 6 for _ in range(6)]
    for a, b, s in ((0, 5, 1), (1, 4, sign_25), (2, 3, 1)):
        rows[a][b] = rows[b][a] = s
    return RatMatrix(rows)


def catalog_ids() -> list[str]:
    return [e.value for e in ExampleId]
