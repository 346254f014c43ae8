"""Exact rational linear algebra plus a float matrix exponential.

All algebraic structure in the package lives in :class:`RatMatrix` (entries
are :class:`fractions.Fraction`), so rank, nullspace and nondegeneracy
questions are decided exactly.  Only geodesic integration drops to floats,
through :func:`mat_exp_phi`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import InvalidBasis, InvalidShape

Rat = Fraction
Vector = tuple  # tuple[Fraction, ...]

FLOAT_TOL = 1e-9


def rat(x) -> Fraction:
    """Coerce ints, Fractions and rational strings ("p/q" or "p") to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rat(x: Fraction) -> str:
    x = rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def vec(values: Iterable) -> Vector:
    return tuple(rat(v) for v in values)


def zero_vec(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vec(n: int, i: int) -> Vector:
    return tuple(Fraction(1 if k == i else 0) for k in range(n))


def vadd(x: Sequence, y: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def vsub(x: Sequence, y: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def vscale(c, x: Sequence) -> Vector:
    return tuple(c * a for a in x)


def dot(x: Sequence, y: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def is_zero_vec(x: Sequence) -> bool:
    return all(a == 0 for a in x)


class RatMatrix:
    """Immutable dense matrix over the rationals, stored row-major."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(rat(v) for v in row) for row in rows)
        if ncols is None:
            if not data:
                raise InvalidShape("ncols must be given for a matrix with no rows")
            ncols = len(data[0])
        if any(len(r) != ncols for r in data):
            raise InvalidShape("ragged rows")
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols

    # -- constructors -------------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RatMatrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def diag(cls, values: Sequence) -> "RatMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "RatMatrix":
        return cls([[c[i] for c in cols] for i in range(nrows)], len(cols))

    # -- basic protocol -----------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def rows(self) -> tuple:
        return self._rows

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self._rows[i][j]
        return self._rows[idx]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.shape, self._rows))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rat(v) for v in r) for r in self._rows)
        return f"RatMatrix({self.nrows}x{self.ncols}: [{body}])"

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(v) for v in r] for r in self._rows], dtype=float).reshape(
            self.nrows, self.ncols
        )

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix(
            [[self._rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            self.nrows,
        )

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise InvalidShape(f"shape mismatch {self.shape} vs {other.shape}")
        return RatMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], self.ncols
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise InvalidShape(f"shape mismatch {self.shape} vs {other.shape}")
        return RatMatrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], self.ncols
        )

    def __neg__(self) -> "RatMatrix":
        return RatMatrix([[-a for a in r] for r in self._rows], self.ncols)

    def __mul__(self, c) -> "RatMatrix":
        c = rat(c)
        return RatMatrix([[c * a for a in r] for r in self._rows], self.ncols)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.ncols != other.nrows:
                raise InvalidShape(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            return RatMatrix(
                [[dot(r, c) for c in cols] for r in self._rows], other.ncols
            )
        other = tuple(other)
        if len(other) != self.ncols:
            raise InvalidShape(f"cannot apply {self.shape} matrix to vector of length {len(other)}")
        return tuple(dot(r, other) for r in self._rows)

    def commutator(self, other: "RatMatrix") -> "RatMatrix":
        return self @ other - other @ self

    def is_zero(self) -> bool:
        return all(a == 0 for r in self._rows for a in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.T

    def trace(self) -> Fraction:
        return sum((self._rows[i][i] for i in range(min(self.shape))), Fraction(0))

    def hstack(self, *others: "RatMatrix") -> "RatMatrix":
        mats = (self,) + others
        if any(m.nrows != self.nrows for m in mats):
            raise InvalidShape("hstack needs equal row counts")
        return RatMatrix(
            [sum((m._rows[i] for m in mats), ()) for i in range(self.nrows)],
            sum(m.ncols for m in mats),
        )

    def vstack(self, *others: "RatMatrix") -> "RatMatrix":
        mats = (self,) + others
        if any(m.ncols != self.ncols for m in mats):
            raise InvalidShape("vstack needs equal column counts")
        return RatMatrix([r for m in mats for r in m._rows], self.ncols)

    def flatten(self) -> Vector:
        return tuple(a for r in self._rows for a in r)

    # -- elimination --------------------------------------------------------
    def rref(self) -> tuple["RatMatrix", list[int]]:
        """Reduced row echelon form and the pivot columns."""
        m = [list(r) for r in self._rows]
        pivots: list[int] = []
        prow = 0
        for c in range(self.ncols):
            if prow >= self.nrows:
                break
            sel = next((i for i in range(prow, self.nrows) if m[i][c] != 0), None)
            if sel is None:
                continue
            m[prow], m[sel] = m[sel], m[prow]
            p = m[prow][c]
            if p != 1:
                m[prow] = [a / p for a in m[prow]]
            for i in range(self.nrows):
                f = m[i][c]
                if i != prow and f != 0:
                    pr = m[prow]
                    m[i] = [a - f * b for a, b in zip(m[i], pr)]
            pivots.append(c)
            prow += 1
        return RatMatrix(m, self.ncols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> "RatMatrix":
        """Basis of the right kernel as the columns of an ncols x k matrix.

        One basis vector per free column, with that free variable set to 1
        and the other free variables 0 (the usual RREF basis, so results are
        deterministic in the input basis order).
        """
        r, pivots = self.rref()
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for f in free:
            x = [Fraction(0)] * self.ncols
            x[f] = Fraction(1)
            for row, pc in enumerate(pivots):
                x[pc] = -r[row][f]
            basis.append(x)
        return RatMatrix.from_columns(basis, self.ncols)

    def solve(self, b):
        """Particular solution of ``self @ x = b`` (free variables zero) or None.

        ``b`` may be a vector or a RatMatrix of right-hand sides.
        """
        if isinstance(b, RatMatrix):
            sols = [self.solve(col) for col in b.columns()]
            if any(s is None for s in sols):
                return None
            return RatMatrix.from_columns(sols, self.ncols)
        b = vec(b)
        if len(b) != self.nrows:
            raise InvalidShape("right-hand side length mismatch")
        aug = RatMatrix([r + (bi,) for r, bi in zip(self._rows, b)], self.ncols + 1)
        r, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        x = [Fraction(0)] * self.ncols
        for row, pc in enumerate(pivots):
            x[pc] = r[row][self.ncols]
        return tuple(x)

    def inverse(self) -> "RatMatrix":
        if not self.is_square():
            raise InvalidShape("inverse of a non-square matrix")
        n = self.nrows
        r, pivots = self.hstack(RatMatrix.identity(n)).rref()
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return RatMatrix([row[n:] for row in r.rows], n)

    def det(self) -> Fraction:
        if not self.is_square():
            raise InvalidShape("determinant of a non-square matrix")
        m = [list(r) for r in self._rows]
        n = self.nrows
        d = Fraction(1)
        for c in range(n):
            sel = next((i for i in range(c, n) if m[i][c] != 0), None)
            if sel is None:
                return Fraction(0)
            if sel != c:
                m[c], m[sel] = m[sel], m[c]
                d = -d
            p = m[c][c]
            d *= p
            for i in range(c + 1, n):
                f = m[i][c] / p
                if f:
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        return d

    def independent_columns(self) -> list[int]:
        """Indices of a greedy maximal independent set of columns."""
        return self.rref()[1]


def span_basis(vectors: Sequence[Sequence], n: int) -> RatMatrix:
    """Greedy basis (subset of ``vectors``, in order) of their span, as columns."""
    vectors = [vec(v) for v in vectors]
    if not vectors:
        return RatMatrix.zeros(n, 0)
    m = RatMatrix.from_columns(vectors, n)
    keep = m.independent_columns()
    return RatMatrix.from_columns([vectors[i] for i in keep], n)


def in_span(basis: RatMatrix, x: Sequence) -> bool:
    if basis.ncols == 0:
        return is_zero_vec(x)
    return basis.solve(x) is not None


def coordinates(basis: RatMatrix, x: Sequence) -> Vector:
    """Coordinates of ``x`` in an independent column basis; ValueError if not in span."""
    sol = basis.solve(x)
    if sol is None:
        raise ValueError("vector is not in the span of the basis")
    return sol


def block_diag(*blocks: RatMatrix) -> RatMatrix:
    n = sum(b.nrows for b in blocks)
    m = sum(b.ncols for b in blocks)
    rows = []
    col0 = 0
    for b in blocks:
        for r in b.rows:
            rows.append([0] * col0 + list(r) + [0] * (m - col0 - b.ncols))
        col0 += b.ncols
    return RatMatrix(rows, m) if rows else RatMatrix.zeros(n, m)


def _check_independent(basis: RatMatrix) -> None:
    if basis.rank() != basis.ncols:
        raise InvalidBasis("basis vectors are linearly dependent")


@dataclass(frozen=True)
class SymmetricForm:
    """Exact symmetric bilinear form given by its Gram matrix."""

    gram: RatMatrix

    def __post_init__(self):
        if not self.gram.is_square():
            raise InvalidShape("Gram matrix must be square")
        if not self.gram.is_symmetric():
            raise InvalidShape("Gram matrix must be symmetric")

    @classmethod
    def from_rows(cls, rows) -> "SymmetricForm":
        return cls(RatMatrix(rows))

    @classmethod
    def diag(cls, values) -> "SymmetricForm":
        return cls(RatMatrix.diag([rat(v) for v in values]))

    @property
    def dim(self) -> int:
        return self.gram.nrows

    def pair(self, x: Sequence, y: Sequence) -> Fraction:
        return dot(x, self.gram @ tuple(y))

    def restrict(self, basis: RatMatrix) -> "SymmetricForm":
        return SymmetricForm(basis.T @ self.gram @ basis)

    def is_nondegenerate(self) -> bool:
        return self.gram.det() != 0

    def signature(self) -> tuple[int, int, int]:
        return signature(self)

    def __neg__(self) -> "SymmetricForm":
        return SymmetricForm(-self.gram)


def congruence_diagonalize(form: SymmetricForm) -> tuple[RatMatrix, tuple]:
    """Return ``(C, d)`` with ``C.T @ G @ C == diag(d)`` and C invertible.

    Symmetric Gaussian elimination; a zero pivot with a nonzero off-diagonal
    entry is repaired by ``e_k <- e_k + e_j``.
    """
    n = form.dim
    a = form.gram.tolist()
    c = RatMatrix.identity(n).tolist()  # columns of c are the new basis vectors

    def add_to(k, j, f):
        # e_k <- e_k + f e_j, applied as a congruence
        for i in range(n):
            a[k][i] += f * a[j][i]
        for i in range(n):
            a[i][k] += f * a[i][j]
        for i in range(n):
            c[i][k] += f * c[i][j]

    def swap(k, j):
        a[k], a[j] = a[j], a[k]
        for row in a:
            row[k], row[j] = row[j], row[k]
        for row in c:
            row[k], row[j] = row[j], row[k]

    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    continue
                add_to(k, j, Fraction(1))
        p = a[k][k]
        for i in range(k + 1, n):
            if a[i][k] != 0:
                add_to(i, k, -a[i][k] / p)
    return RatMatrix(c, n), tuple(a[i][i] for i in range(n))


def signature(form: SymmetricForm) -> tuple[int, int, int]:
    """Sylvester triple (positive, negative, null) by exact congruence."""
    _, d = congruence_diagonalize(form)
    p = sum(1 for x in d if x > 0)
    q = sum(1 for x in d if x < 0)
    return p, q, form.dim - p - q


def orthogonal_complement(form: SymmetricForm, subspace: RatMatrix) -> RatMatrix:
    """Basis (columns) of ``{x : <x, s> = 0 for all s in subspace}``."""
    if subspace.nrows != form.dim:
        raise InvalidShape("subspace lives in the wrong dimension")
    if subspace.ncols == 0:
        return RatMatrix.identity(form.dim)
    _check_independent(subspace)
    return (subspace.T @ form.gram).nullspace()


@dataclass(frozen=True)
class WittParts:
    """Bases (as columns) of the four summands ``(u + v) + (z_tilde + v_tilde)``."""

    u: RatMatrix
    v: RatMatrix
    z_tilde: RatMatrix
    v_tilde: RatMatrix


def isotropic_partner(form: SymmetricForm, null_basis: RatMatrix) -> RatMatrix:
    """Isotropic ``v`` with ``<u_i, v_k> = delta_ik`` for a totally isotropic ``u``.

    Deterministic rule: solve ``<u_k, w_i> = delta_ik`` by RREF with free
    variables zero (so input basis order decides), then remove the
    self-pairing with ``v_i = w_i - sum_l 1/2 <w_i, w_l> u_l``.
    """
    n = form.dim
    k = null_basis.ncols
    if k == 0:
        return RatMatrix.zeros(n, 0)
    a = null_basis.T @ form.gram
    ws = []
    for i in range(k):
        w = a.solve(unit_vec(k, i))
        if w is None:
            raise InvalidBasis("null subspace is not paired nondegenerately with the space")
        ws.append(w)
    vs = []
    for i in range(k):
        v = ws[i]
        for l in range(k):
            coef = form.pair(ws[i], ws[l]) / 2
            if coef:
                v = vsub(v, vscale(coef, null_basis.column(l)))
        vs.append(v)
    return RatMatrix.from_columns(vs, n)


def witt_decompose(form: SymmetricForm, center: RatMatrix) -> WittParts:
    """Split ``n = (u + v) + (z_tilde + v_tilde)`` orthogonally.

    ``u`` is the radical of the form on ``center``; ``v`` is an isotropic
    partner of ``u`` (see :func:`isotropic_partner`); ``z_tilde`` is the part
    of the center orthogonal to ``v``; ``v_tilde`` completes
    ``(u + v)^perp``.  The choice of ``v`` is not canonical.
    """
    n = form.dim
    if center.ncols:
        _check_independent(center)
    gz = form.restrict(center).gram
    u = center @ gz.nullspace() if center.ncols else RatMatrix.zeros(n, 0)
    v = isotropic_partner(form, u)
    uv = u.hstack(v)
    perp = orthogonal_complement(form, uv) if uv.ncols else RatMatrix.identity(n)
    # z_tilde = center ∩ v^perp
    if v.ncols and center.ncols:
        coeffs = (v.T @ form.gram @ center).nullspace()
        z_tilde = center @ coeffs
    else:
        z_tilde = center
    if z_tilde.ncols:
        coeffs = (z_tilde.T @ form.gram @ perp).nullspace()
        v_tilde = perp @ coeffs
    else:
        v_tilde = perp
    return WittParts(u=u, v=v, z_tilde=z_tilde, v_tilde=v_tilde)


def orthogonal_basis(form: SymmetricForm, basis: RatMatrix | None = None) -> RatMatrix:
    """Exact Gram-Schmidt: a basis of non-null, mutually orthogonal vectors.

    Requires the form to be nondegenerate on the span.  When every remaining
    vector is null, ``x + y`` for a pair with ``<x, y> != 0`` is used as the
    next pivot.
    """
    if basis is None:
        basis = RatMatrix.identity(form.dim)
    remaining = basis.columns()
    out = []
    while remaining:
        idx = next((i for i, x in enumerate(remaining) if form.pair(x, x) != 0), None)
        if idx is None:
            pair = next(
                ((i, j) for i in range(len(remaining)) for j in range(i + 1, len(remaining))
                 if form.pair(remaining[i], remaining[j]) != 0),
                None,
            )
            if pair is None:
                raise InvalidBasis("form is degenerate on the given span")
            i, j = pair
            remaining[i] = vadd(remaining[i], remaining[j])
            idx = i
        p = remaining.pop(idx)
        pp = form.pair(p, p)
        out.append(p)
        remaining = [vsub(x, vscale(form.pair(x, p) / pp, p)) for x in remaining]
    return RatMatrix.from_columns(out, form.dim)


def mat_exp_phi(m, t) -> tuple[np.ndarray, np.ndarray]:
    """``(exp(t M), integral_0^t exp(s M) ds)`` in floating point.

    Both come from one scaling-and-squaring Pade exponential of the block
    matrix ``t [[M, I], [0, 0]]``: its top-left block is ``exp(tM)`` and its
    top-right block is the integral.  ``t`` may be a 1-d array, in which case
    the results are stacked along a leading axis and computed in one batch.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidShape(f"expected a square matrix, got shape {m.shape}")
    ts = np.asarray(t, dtype=float)
    if ts.ndim > 1:
        raise InvalidShape("t must be a scalar or a 1-d array")
    if not (np.all(np.isfinite(m)) and np.all(np.isfinite(ts))):
        raise ValueError("non-finite input")
    k = m.shape[0]
    block = np.zeros((2 * k, 2 * k))
    block[:k, :k] = m
    block[:k, k:] = np.eye(k)
    big = scipy.linalg.expm(ts[..., None, None] * block)
    return big[..., :k, :k], big[..., :k, k:]
