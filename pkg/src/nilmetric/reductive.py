"""Decision procedures: ad-invariance, natural reductivity, isotropy, corank."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .construct import DataSet, ad_invariance_witness, modified_cotangent
from .errors import InternalInconsistency, NotAdInvariant
from .exactlin import (
    RatMatrix,
    SymmetricForm,
    coordinates,
    in_span,
    is_zero_vec,
    isotropic_partner,
    orthogonal_complement,
    span_basis,
    unit_vec,
)
from .metgeo import CenterSplitting, MetricNilLieAlgebra, center_splitting
from .nilalg import NilLieAlgebra, from_structure_constants, structure_report

# --------------------------------------------------------------------------
# ad-invariance


@dataclass(frozen=True)
class AdInvariance:
    holds: bool
    witness: tuple[int, int, int] | None = None
    value: Fraction | None = None

    def __bool__(self) -> bool:
        return self.holds


def is_ad_invariant(m, metric: SymmetricForm | None = None) -> AdInvariance:
    """Exact check of ``<[x,y],z> + <y,[x,z]> = 0`` over all basis triples.

    Accepts a :class:`MetricNilLieAlgebra`, or any algebra plus a form.
    """
    if isinstance(m, MetricNilLieAlgebra):
        alg, metric = m.alg, m.metric
    else:
        alg = m
        if metric is None:
            raise TypeError("a metric is required for a bare algebra")
    w = ad_invariance_witness(alg, metric)
    if w is None:
        return AdInvariance(True)
    i, j, k = w
    n = alg.dim
    val = metric.pair(alg.c[i][j], unit_vec(n, k)) + metric.pair(unit_vec(n, j), alg.c[i][k])
    return AdInvariance(False, w, val)


# --------------------------------------------------------------------------
# natural reductivity


@dataclass(frozen=True)
class Verdict:
    kind: str  # "NaturallyReductive" | "Fails" | "Inapplicable"
    reason: str = ""
    witness: Any = None

    @property
    def ok(self) -> bool:
        return self.kind == "NaturallyReductive"


@dataclass(frozen=True)
class ReductivityReport:
    j_injective: bool
    closed_under_bracket: bool
    tau: tuple | None
    tau_skew: bool
    verdict: Verdict
    split: CenterSplitting | None = None

    def tau_algebra(self) -> NilLieAlgebra:
        """``(z, tau)`` as a Lie algebra on the z-basis of the splitting."""
        if self.tau is None:
            raise ValueError("tau is only defined when j(z) is closed under brackets")
        p = len(self.tau)
        brackets = [(i, j, list(self.tau[i][j])) for i in range(p) for j in range(i + 1, p) if any(self.tau[i][j])]
        names = tuple(f"z{i + 1}" for i in range(p))
        return from_structure_constants(p, brackets, names, require_nilpotent=False)


def naturally_reductive_check(m: MetricNilLieAlgebra) -> ReductivityReport:
    """Decide whether ``span j(z)`` is a subalgebra with skew-adjoint ``tau``.

    ``tau`` is defined by ``[j(z_i), j(z_j)] = j(tau(z_i, z_j))``.  Raises
    ``NotTwoStep`` / ``DegenerateCenter`` when the splitting does not exist.
    """
    split = center_splitting(m)
    p, q = split.p, split.q
    if not split.j_injective:
        return ReductivityReport(
            False, False, None, False,
            Verdict("Inapplicable", "criterion assumes j injective", None), split,
        )
    if p == 0:
        return ReductivityReport(True, True, (), True, Verdict("NaturallyReductive"), split)
    js = split.j_ops
    basis = RatMatrix.from_columns([j.flatten() for j in js], q * q)
    if basis.nullspace().ncols:
        raise InternalInconsistency("j-matrices are dependent although j is injective")
    tau = [[[Fraction(0)] * p for _ in range(p)] for _ in range(p)]
    for i in range(p):
        for j in range(i + 1, p):
            comm = js[i].commutator(js[j]).flatten()
            sol = basis.solve(comm)
            if sol is None:
                return ReductivityReport(
                    True, False, None, False,
                    Verdict("Fails", "span of j(z) is not closed under the commutator", (i, j)), split,
                )
            tau[i][j] = list(sol)
            tau[j][i] = [-x for x in sol]
    tau_t = tuple(tuple(tuple(r) for r in plane) for plane in tau)
    gz = split.gram_z
    skew = True
    witness = None
    for i in range(p):
        t_i = RatMatrix([[tau_t[i][b][a] for b in range(p)] for a in range(p)], p)
        if not (gz @ t_i + t_i.T @ gz).is_zero():
            skew, witness = False, i
            break
    # Jacobi for tau is forced by closure and injectivity
    for i in range(p):
        for j in range(p):
            for k in range(p):
                total = [Fraction(0)] * p
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    inner = tau_t[a][b]
                    for s in range(p):
                        if inner[s]:
                            for r in range(p):
                                total[r] += inner[s] * tau_t[s][c][r]
                if any(total):
                    raise InternalInconsistency("tau violates the Jacobi identity")
    verdict = (
        Verdict("NaturallyReductive")
        if skew
        else Verdict("Fails", "tau(x) is not skew-adjoint on the center", witness)
    )
    return ReductivityReport(True, True, tau_t, skew, verdict, split)


def extract_data_set(m: MetricNilLieAlgebra) -> DataSet:
    """The data set ``((z, tau), <,>_z, j, <,>_v)`` of a naturally reductive metric."""
    rep = naturally_reductive_check(m)
    if not rep.verdict.ok:
        raise NotAdInvariant(f"not naturally reductive: {rep.verdict.reason}", witness=rep.verdict.witness)
    split = rep.split
    return DataSet(
        g=rep.tau_algebra(),
        metric_g=SymmetricForm(split.gram_z),
        rep=split.j_ops,
        metric_V=SymmetricForm(split.gram_v),
        name=m.name,
    )


# --------------------------------------------------------------------------
# isotropy


@dataclass(frozen=True)
class IsotropyAlgebra:
    basis: tuple  # pairs (A on z, B on v)
    split: CenterSplitting

    @property
    def dim(self) -> int:
        return len(self.basis)


def _isotropy_system(split: CenterSplitting) -> RatMatrix:
    p, q = split.p, split.q
    gz, gv = split.gram_z, split.gram_v
    nvar = p * p + q * q

    def constraints(A: RatMatrix, B: RatMatrix) -> list:
        out = list((gz @ A + A.T @ gz).flatten()) if p else []
        if q:
            out += list((gv @ B + B.T @ gv).flatten())
            for i, ji in enumerate(split.j_ops):
                lhs = B.commutator(ji)
                for k in range(p):
                    if A[k, i]:
                        lhs = lhs - split.j_ops[k] * A[k, i]
                out += list(lhs.flatten())
        return out

    cols = []
    for idx in range(nvar):
        A, B = _unpack(unit_vec(nvar, idx), p, q)
        cols.append(constraints(A, B))
    nrows = len(cols[0]) if cols else 0
    return RatMatrix.from_columns(cols, nrows)


def _unpack(x, p: int, q: int) -> tuple[RatMatrix, RatMatrix]:
    A = RatMatrix([x[r * p:(r + 1) * p] for r in range(p)], p)
    off = p * p
    B = RatMatrix([x[off + r * q: off + (r + 1) * q] for r in range(q)], q)
    return A, B


def _pack(A: RatMatrix, B: RatMatrix) -> tuple:
    return tuple(A.flatten()) + tuple(B.flatten())


def isotropy_algebra(m: MetricNilLieAlgebra) -> IsotropyAlgebra:
    """Pairs ``(A, B)`` in ``so(z) x so(v)`` with ``[B, j(x)] = j(A x)``.

    The result is an exact nullspace basis; closure under the componentwise
    commutator is verified, as are ``A = j^-1 ad(B) j`` (injective j) and the
    derivation property of ``A`` for ``tau`` (naturally reductive case).
    """
    split = center_splitting(m)
    p, q = split.p, split.q
    system = _isotropy_system(split)
    null = system.nullspace()
    pairs = tuple(_unpack(col, p, q) for col in null.columns())
    for A, B in pairs:
        for A2, B2 in pairs:
            if not in_span(null, _pack(A.commutator(A2), B.commutator(B2))):
                raise InternalInconsistency("isotropy solution space is not a Lie algebra")
    if split.j_injective and p and q:
        jmat = RatMatrix.from_columns([j.flatten() for j in split.j_ops], q * q)
        for A, B in pairs:
            for i, ji in enumerate(split.j_ops):
                col = jmat.solve(B.commutator(ji).flatten())
                if col is None or tuple(col) != A.column(i):
                    raise InternalInconsistency("A differs from j^-1 ad(B) j")
        rep = naturally_reductive_check(m)
        if rep.tau is not None:
            tau = rep.tau
            for A, _ in pairs:
                for i in range(p):
                    for j in range(p):
                        lhs = A @ tau[i][j]
                        ai, aj = A.column(i), A.column(j)
                        rhs = [Fraction(0)] * p
                        for s in range(p):
                            for r in range(p):
                                rhs[r] += ai[s] * tau[s][j][r] + aj[s] * tau[i][s][r]
                        if tuple(lhs) != tuple(rhs):
                            raise InternalInconsistency("A is not a derivation of tau")
    return IsotropyAlgebra(basis=pairs, split=split)


def skew_centralizer(gram: RatMatrix, t: RatMatrix) -> RatMatrix:
    """Basis (flattened columns) of ``{B : B skew for gram, [B, t] = 0}``."""
    q = gram.nrows
    cols = []
    for idx in range(q * q):
        B = RatMatrix([unit_vec(q * q, idx)[r * q:(r + 1) * q] for r in range(q)], q)
        cols.append(tuple((gram @ B + B.T @ gram).flatten()) + tuple(B.commutator(t).flatten()))
    return RatMatrix.from_columns(cols, 2 * q * q).nullspace()


# --------------------------------------------------------------------------
# corank normal form


@dataclass(frozen=True)
class CorankNormalForm:
    corank: int
    z_tilde_basis: RatMatrix
    n_tilde_basis: RatMatrix
    z_basis: RatMatrix  # isotropic center of n_tilde (= commutator)
    v_basis: RatMatrix  # isotropic partner of z inside n_tilde
    inner_v: SymmetricForm
    rho: tuple
    rebuilt: MetricNilLieAlgebra | None
    change_of_basis: RatMatrix  # columns: images of (phi_1.., w_1..) in n


def _greedy_complement(ambient: RatMatrix, sub: RatMatrix, n: int) -> RatMatrix:
    chosen = []
    current = sub
    for col in ambient.columns():
        new = not is_zero_vec(col) if current.ncols == 0 else not in_span(current, col)
        if new:
            chosen.append(col)
            current = span_basis(current.columns() + [col], n)
    return RatMatrix.from_columns(chosen, n) if chosen else RatMatrix.zeros(n, 0)


def corank_decomposition(m: MetricNilLieAlgebra) -> CorankNormalForm:
    """Split ``n = z_tilde (+) n_tilde`` and put ``n_tilde`` in modified-cotangent form."""
    adi = is_ad_invariant(m)
    if not adi:
        raise NotAdInvariant("metric is not ad-invariant", witness=adi.witness)
    m.alg.require_two_step()
    n = m.dim
    rep = structure_report(m.alg)
    center, comm = rep.center_basis, rep.commutator_basis
    z_tilde = _greedy_complement(center, comm, n)
    if z_tilde.ncols and not m.metric.restrict(z_tilde).is_nondegenerate():
        raise InternalInconsistency("metric is degenerate on the central complement")
    n_tilde = orthogonal_complement(m.metric, z_tilde) if z_tilde.ncols else RatMatrix.identity(n)
    if comm.ncols and not m.metric.restrict(comm).gram.is_zero():
        raise InternalInconsistency("commutator is not isotropic")
    k = comm.ncols
    # isotropic partner of C inside n_tilde, computed in n_tilde coordinates
    form_nt = m.metric.restrict(n_tilde)
    comm_nt = RatMatrix.from_columns([coordinates(n_tilde, c) for c in comm.columns()], n_tilde.ncols) if k else RatMatrix.zeros(n_tilde.ncols, 0)
    v = n_tilde @ isotropic_partner(form_nt, comm_nt) if k else RatMatrix.zeros(n, 0)
    if n_tilde.ncols != 2 * k:
        raise InternalInconsistency("corank-0 factor does not have dimension 2 dim C")
    inner = SymmetricForm(RatMatrix.identity(k))
    rho = []
    for c in range(k):
        rows = [[Fraction(0)] * k for _ in range(k)]
        for a in range(k):
            for b in range(k):
                co = coordinates(comm, m.bracket(v.column(a), v.column(b)))
                rows[b][a] = co[c]
        rho.append(RatMatrix(rows, k))
    P = comm.hstack(v) if k else RatMatrix.zeros(n, 0)
    rebuilt = None
    if k:
        rebuilt = modified_cotangent(k, inner, rho)
        for a in range(2 * k):
            for b in range(2 * k):
                lhs = P @ rebuilt.alg.c[a][b]
                if tuple(lhs) != m.bracket(P.column(a), P.column(b)):
                    raise InternalInconsistency("rebuilt bracket differs under the change of basis")
        if P.T @ m.gram @ P != rebuilt.gram:
            raise InternalInconsistency("rebuilt metric differs under the change of basis")
    return CorankNormalForm(
        corank=rep.corank,
        z_tilde_basis=z_tilde,
        n_tilde_basis=n_tilde,
        z_basis=comm,
        v_basis=v,
        inner_v=inner,
        rho=tuple(rho),
        rebuilt=rebuilt,
        change_of_basis=P,
    )
