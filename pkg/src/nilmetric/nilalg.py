"""Lie algebras given by exact structure constants.

``c[i][j][k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``.  Indices are
0-based throughout the Python API; the JSON layer uses 1-based indices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    AntisymmetryViolation,
    DegenerateCenter,
    JacobiViolation,
    NotNilpotent,
    NotTwoStep,
)
from .exactlin import (
    RatMatrix,
    SymmetricForm,
    Vector,
    is_zero_vec,
    rat,
    span_basis,
    unit_vec,
    vadd,
    vec,
    vscale,
    zero_vec,
)

NONSINGULAR_SEED = 0x5EED
NONSINGULAR_SAMPLES = 64


@dataclass(frozen=True, eq=False)
class NilLieAlgebra:
    """Finite-dimensional Lie algebra with validated rational structure constants.

    Despite the name, general (solvable, semisimple) algebras are allowed
    when built with ``require_nilpotent=False``; ``step`` is then ``None``
    for non-nilpotent algebras.  Data sets need that for their ``g``.
    """

    dim: int
    c: tuple
    basis_names: tuple = ()
    step: int | None = None
    _ad: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if not self.basis_names:
            object.__setattr__(self, "basis_names", tuple(f"e{i + 1}" for i in range(self.dim)))
        ad = tuple(
            RatMatrix([[self.c[i][j][k] for j in range(self.dim)] for k in range(self.dim)], self.dim)
            for i in range(self.dim)
        )
        object.__setattr__(self, "_ad", ad)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NilLieAlgebra):
            return NotImplemented
        return (self.dim, self.c, self.basis_names) == (other.dim, other.c, other.basis_names)

    def __hash__(self) -> int:
        return hash((self.dim, self.c))

    @property
    def is_nilpotent(self) -> bool:
        return self.step is not None

    @property
    def is_two_step(self) -> bool:
        """True for step <= 2 (abelian algebras included)."""
        return self.step is not None and self.step <= 2

    def ad(self, x: Sequence) -> RatMatrix:
        """Matrix of ``ad(x)`` acting on coordinate columns."""
        x = vec(x)
        out = RatMatrix.zeros(self.dim, self.dim)
        for i, xi in enumerate(x):
            if xi:
                out = out + self._ad[i] * xi
        return out

    def ad_basis(self, i: int) -> RatMatrix:
        return self._ad[i]

    def bracket(self, x: Sequence, y: Sequence) -> Vector:
        return bracket_eval(self, x, y)

    def basis_vector(self, i: int) -> Vector:
        return unit_vec(self.dim, i)

    def nonzero_brackets(self) -> list[tuple[int, int, Vector]]:
        """All ``(i, j, [e_i, e_j])`` with i < j and nonzero bracket."""
        return [
            (i, j, tuple(self.c[i][j]))
            for i in range(self.dim)
            for j in range(i + 1, self.dim)
            if any(self.c[i][j])
        ]

    def center(self) -> RatMatrix:
        return structure_report(self).center_basis

    def commutator(self) -> RatMatrix:
        return structure_report(self).commutator_basis

    def require_two_step(self) -> None:
        if not self.is_two_step:
            raise NotTwoStep(f"algebra has step {self.step}, expected at most 2")


def _normalize_coeffs(coeffs, dim: int) -> list[Fraction]:
    if isinstance(coeffs, Mapping):
        out = [Fraction(0)] * dim
        for k, v in coeffs.items():
            k = int(k)
            if not 0 <= k < dim:
                raise IndexError(f"bracket coefficient index {k} out of range")
            out[k] = rat(v)
        return out
    coeffs = [rat(v) for v in coeffs]
    if len(coeffs) != dim:
        raise IndexError("dense bracket coefficient list has the wrong length")
    return coeffs


def _lower_central_step(dim: int, brackets_of: callable) -> int | None:
    current = RatMatrix.identity(dim)
    step = 0
    while current.ncols:
        step += 1
        vecs = [brackets_of(i, col) for i in range(dim) for col in current.columns()]
        nxt = span_basis([v for v in vecs if not is_zero_vec(v)], dim)
        if nxt.ncols == current.ncols:
            return None
        current = nxt
    return step


def from_structure_constants(
    dim: int,
    brackets: Iterable,
    basis_names: Sequence[str] | None = None,
    require_nilpotent: bool = True,
) -> NilLieAlgebra:
    """Build and validate a Lie algebra from sparse brackets.

    ``brackets`` holds ``(i, j, coeffs)`` triples meaning
    ``[e_i, e_j] = sum_k coeffs[k] e_k``; ``coeffs`` is a dict ``{k: value}``
    or a dense list.  The mirror entry ``(j, i)`` is filled in by
    antisymmetry; if both are supplied they must agree.
    """
    if dim < 1:
        raise ValueError("dimension must be positive")
    c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    given: dict[tuple[int, int], list[Fraction]] = {}
    for i, j, coeffs in brackets:
        i, j = int(i), int(j)
        if not (0 <= i < dim and 0 <= j < dim):
            raise IndexError(f"bracket index ({i}, {j}) out of range")
        co = _normalize_coeffs(coeffs, dim)
        if i == j:
            if any(co):
                raise AntisymmetryViolation(f"[e{i + 1}, e{i + 1}] must vanish", witness=(i, i))
            continue
        if (i, j) in given and given[(i, j)] != co:
            raise AntisymmetryViolation(f"conflicting entries for [e{i + 1}, e{j + 1}]", witness=(i, j))
        if (j, i) in given and given[(j, i)] != [-x for x in co]:
            raise AntisymmetryViolation(
                f"[e{i + 1}, e{j + 1}] is not minus [e{j + 1}, e{i + 1}]", witness=(i, j)
            )
        given[(i, j)] = co
        c[i][j] = list(co)
        c[j][i] = [-x for x in co]
    ctuple = tuple(tuple(tuple(row) for row in plane) for plane in c)

    def br(i, y):
        return tuple(sum((y[j] * ctuple[i][j][k] for j in range(dim) if y[j]), Fraction(0)) for k in range(dim))

    for i in range(dim):
        for j in range(i + 1, dim):
            for k in range(j + 1, dim):
                total = vadd(
                    vadd(br(k, ctuple[i][j]), br(i, ctuple[j][k])), br(j, ctuple[k][i])
                )
                if not is_zero_vec(total):
                    raise JacobiViolation(
                        f"Jacobi identity fails on (e{i + 1}, e{j + 1}, e{k + 1})", witness=(i, j, k)
                    )
    step = _lower_central_step(dim, br)
    if step is None and require_nilpotent:
        raise NotNilpotent("lower central series does not reach zero")
    names = tuple(basis_names) if basis_names else ()
    if names and len(names) != dim:
        raise ValueError("basis_names has the wrong length")
    return NilLieAlgebra(dim=dim, c=ctuple, basis_names=names, step=step)


def abelian(dim: int) -> NilLieAlgebra:
    return from_structure_constants(dim, [])


def direct_sum(a: NilLieAlgebra, b: NilLieAlgebra) -> NilLieAlgebra:
    """``a x b`` with the basis of ``a`` first."""
    n = a.dim + b.dim
    brackets = []
    for i, j, v in a.nonzero_brackets():
        brackets.append((i, j, list(v) + [0] * b.dim))
    for i, j, v in b.nonzero_brackets():
        brackets.append((a.dim + i, a.dim + j, [0] * a.dim + list(v)))
    return from_structure_constants(
        n, brackets, tuple(a.basis_names) + tuple(b.basis_names) if _names_disjoint(a, b) else None,
        require_nilpotent=a.is_nilpotent and b.is_nilpotent,
    )


def _names_disjoint(a: NilLieAlgebra, b: NilLieAlgebra) -> bool:
    return not set(a.basis_names) & set(b.basis_names)


def bracket_eval(alg: NilLieAlgebra, x: Sequence, y: Sequence) -> Vector:
    """Exact bilinear expansion ``[x, y] = sum x_i y_j c_ij^k e_k``."""
    x, y = vec(x), vec(y)
    if len(x) != alg.dim or len(y) != alg.dim:
        raise ValueError("vector length does not match the algebra dimension")
    out = zero_vec(alg.dim)
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if yj and i != j:
                out = vadd(out, vscale(xi * yj, alg.c[i][j]))
    return out


@dataclass(frozen=True)
class StructureReport:
    center_basis: RatMatrix
    commutator_basis: RatMatrix
    corank: int
    step: int | str

    @property
    def center_dim(self) -> int:
        return self.center_basis.ncols

    @property
    def commutator_dim(self) -> int:
        return self.commutator_basis.ncols


def structure_report(alg: NilLieAlgebra) -> StructureReport:
    n = alg.dim
    rows = [[alg.c[i][j][k] for i in range(n)] for j in range(n) for k in range(n)]
    center = RatMatrix(rows, n).nullspace()
    brackets = [v for _, _, v in alg.nonzero_brackets()]
    comm = span_basis(brackets, n)
    if alg.step is None:
        step: int | str = "non-nilpotent"
    elif alg.step <= 2:
        step = alg.step
    else:
        step = "higher"
    return StructureReport(
        center_basis=center,
        commutator_basis=comm,
        corank=center.ncols - comm.ncols,
        step=step,
    )


@dataclass(frozen=True)
class NonsingularityResult:
    """``status`` is one of "Nonsingular", "SingularWitness", "ProbablyNonsingular"."""

    status: str
    witness: Vector | None = None
    samples: int = 0

    @property
    def singular(self) -> bool:
        return self.status == "SingularWitness"


def is_nonsingular(alg: NilLieAlgebra, metric: SymmetricForm, splitting=None) -> NonsingularityResult:
    """Decide whether ``j(x)`` is invertible for every nonzero central ``x``.

    One-dimensional centers are decided exactly.  For larger centers the
    basis vectors are tested first and then ``NONSINGULAR_SAMPLES`` rational
    directions from a fixed seed; finding none singular only yields
    ``ProbablyNonsingular``.
    """
    if splitting is None:
        from .metgeo import MetricNilLieAlgebra, center_splitting

        splitting = center_splitting(MetricNilLieAlgebra(alg, metric))
    if splitting.v_basis.ncols == 0:
        return NonsingularityResult("Nonsingular")
    p = splitting.z_basis.ncols
    if p == 0:
        # j is the zero map on a nonzero v; no central direction exists
        return NonsingularityResult("Nonsingular")

    def singular_at(coeffs) -> bool:
        return splitting.j(coeffs).det() == 0

    for i in range(p):
        e = unit_vec(p, i)
        if singular_at(e):
            return NonsingularityResult("SingularWitness", splitting.z_basis @ e)
    if p == 1:
        return NonsingularityResult("Nonsingular")
    rng = random.Random(NONSINGULAR_SEED)
    for _ in range(NONSINGULAR_SAMPLES):
        coeffs = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(p))
        if all(x == 0 for x in coeffs):
            continue
        if singular_at(coeffs):
            return NonsingularityResult("SingularWitness", splitting.z_basis @ coeffs, NONSINGULAR_SAMPLES)
    return NonsingularityResult("ProbablyNonsingular", None, NONSINGULAR_SAMPLES)


def require_nondegenerate_center(alg: NilLieAlgebra, metric: SymmetricForm) -> RatMatrix:
    center = structure_report(alg).center_basis
    if center.ncols and not metric.restrict(center).is_nondegenerate():
        raise DegenerateCenter("metric restricted to the center is degenerate; use witt_decompose")
    return center
