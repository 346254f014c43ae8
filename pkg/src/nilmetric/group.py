"""Group law of a 2-step nilpotent group in exponential coordinates, and lattices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from .errors import InvalidShape
from .exactlin import rat, vadd, vscale
from .nilalg import NilLieAlgebra


@dataclass(frozen=True)
class GroupPoint:
    """A point ``exp(x)``; coordinates are exact Fractions or floats."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Rational) for c in self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)


def _point(x) -> GroupPoint:
    if isinstance(x, GroupPoint):
        return x
    vals = []
    for c in x:
        if isinstance(c, float):
            vals.append(c)
        else:
            vals.append(rat(c))
    return GroupPoint(tuple(vals))


def _check(alg: NilLieAlgebra, *pts: GroupPoint) -> None:
    alg.require_two_step()
    for p in pts:
        if len(p) != alg.dim:
            raise InvalidShape("point has the wrong number of coordinates")


def group_multiply(alg: NilLieAlgebra, x, y) -> GroupPoint:
    """``exp(x) exp(y) = exp(x + y + 1/2 [x, y])`` (exact for rational input)."""
    x, y = _point(x), _point(y)
    _check(alg, x, y)
    if x.exact and y.exact:
        return GroupPoint(vadd(vadd(x.coords, y.coords), vscale(Fraction(1, 2), alg.bracket(x.coords, y.coords))))
    c = np.array([[[float(v) for v in row] for row in plane] for plane in alg.c])
    xf = np.array([float(v) for v in x.coords])
    yf = np.array([float(v) for v in y.coords])
    out = xf + yf + 0.5 * np.einsum("ijk,i,j->k", c, xf, yf)
    return GroupPoint(tuple(float(v) for v in out))


def group_inverse(alg: NilLieAlgebra, x) -> GroupPoint:
    x = _point(x)
    _check(alg, x)
    return GroupPoint(tuple(-c for c in x.coords))


def identity(alg: NilLieAlgebra) -> GroupPoint:
    return GroupPoint((Fraction(0),) * alg.dim)


# --------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class LatticeSpec:
    """``Gamma = {exp(sum k_i d_i e_i) : k_i integers}``."""

    scaling: tuple

    def __post_init__(self):
        vals = tuple(rat(d) for d in self.scaling)
        if any(d <= 0 for d in vals):
            raise InvalidShape("lattice scalings must be positive")
        object.__setattr__(self, "scaling", vals)

    @property
    def dim(self) -> int:
        return len(self.scaling)

    def contains(self, x: Sequence) -> bool:
        return all((rat(c) / d).denominator == 1 for c, d in zip(x, self.scaling))

    def point(self, ks: Sequence[int]) -> GroupPoint:
        return GroupPoint(tuple(Fraction(k) * d for k, d in zip(ks, self.scaling)))


@dataclass(frozen=True)
class LatticeResult:
    closed: bool
    witness: tuple[int, int] | None = None
    correction: tuple | None = None

    @property
    def status(self) -> str:
        return "Closed" if self.closed else "NotClosed"


def lattice_closure_check(alg: NilLieAlgebra, spec: LatticeSpec) -> LatticeResult:
    """Exact test that ``Gamma`` is closed under the group law.

    ``Gamma`` is closed iff every ``1/2 [d_i e_i, d_j e_j]`` lies in
    ``D Z^n``: the correction term is bilinear in integer coefficients, and
    ``k(k-1)/2``-type terms never arise because ``[x, x] = 0``.
    """
    alg.require_two_step()
    if spec.dim != alg.dim:
        raise InvalidShape("lattice scaling has the wrong length")
    d = spec.scaling
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            corr = vscale(d[i] * d[j] / 2, alg.c[i][j])
            if not spec.contains(corr):
                return LatticeResult(False, (i, j), corr)
    return LatticeResult(True)


def malcev_rational(alg: NilLieAlgebra) -> bool:
    """Structure constants are rational in this basis (always true here), so a lattice exists."""
    return all(isinstance(v, Rational) for plane in alg.c for row in plane for v in row)
