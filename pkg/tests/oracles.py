"""Independent reference computations used to cross-check the package.

Nothing here calls the package's connection, curvature or geodesic code;
only the raw structure constants and Gram matrices are read.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

import numpy as np


def _gram_inverse(gram):
    """Exact inverse by Gauss-Jordan on plain lists of Fractions."""
    n = len(gram)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(gram)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def koszul_christoffel(c, gram):
    """``Gamma[a][b][k]``: coefficient of ``e_k`` in ``nabla_{e_a} e_b``.

    Koszul formula for left-invariant fields:
    ``2<nabla_x y, z> = <[x,y],z> - <[y,z],x> + <[z,x],y>``.
    """
    n = len(gram)
    g = [[Fraction(x) for x in row] for row in gram]
    ginv = _gram_inverse(g)

    def pair_br(i, j, k):  # <[e_i, e_j], e_k>
        return sum((c[i][j][s] * g[s][k] for s in range(n)), Fraction(0))

    gamma = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            low = [(pair_br(a, b, k) - pair_br(b, k, a) + pair_br(k, a, b)) / 2 for k in range(n)]
            gamma[a][b] = [sum((ginv[k][s] * low[s] for s in range(n)), Fraction(0)) for k in range(n)]
    return gamma


def koszul_curvature(c, gram):
    """``R[a][b][d]`` = coefficients of ``R(e_a, e_b) e_d`` from the Koszul connection."""
    n = len(gram)
    gam = koszul_christoffel(c, gram)

    def nab(x, y):  # x, y coefficient lists
        out = [Fraction(0)] * n
        for a in range(n):
            if x[a]:
                for b in range(n):
                    if y[b]:
                        for k in range(n):
                            out[k] += x[a] * y[b] * gam[a][b][k]
        return out

    e = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R = [[[None] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            br = list(c[a][b])
            for d in range(n):
                t1 = nab(e[a], nab(e[b], e[d]))
                t2 = nab(e[b], nab(e[a], e[d]))
                t3 = nab(br, e[d])
                R[a][b][d] = [x - y - z for x, y, z in zip(t1, t2, t3)]
    return R


def series_exp_phi(M: np.ndarray, t: float, terms: int = 60):
    """``(exp(tM), int_0^t exp(sM) ds)`` by truncated Taylor series."""
    n = M.shape[0]
    E = np.zeros((n, n))
    P = np.zeros((n, n))
    power = np.eye(n)
    for k in range(terms):
        E += power * t**k / factorial(k)
        P += power * t ** (k + 1) / factorial(k + 1)
        power = power @ M
    return E, P


def rk4_euler_arnold(c, gram, u0, t_grid, steps_per_unit: int = 2000):
    """Geodesic through the identity by RK4 on the Euler-Arnold system.

    State ``(X, u)`` with ``u' = ad(u)^T u`` (metric transpose:
    ``<ad(u)^T a, b> = <a, [u, b]>``) and ``X' = u + 1/2 [X, u]``, which is the
    left-trivialized velocity relation in exponential coordinates of a 2-step
    group.  Returns positions at the requested times.
    """
    C = np.array([[[float(v) for v in row] for row in plane] for plane in c])
    G = np.array([[float(v) for v in row] for row in gram])
    Ginv = np.linalg.inv(G)

    def br(x, y):
        return np.einsum("ijk,i,j->k", C, x, y)

    def rhs(state):
        n = len(state) // 2
        X, u = state[:n], state[n:]
        # <ad(u)^T u, b> = <u, [u, b]>  ->  lower index: sum_k u_i C_ibk (G u)_k
        low = np.einsum("i,ibk,k->b", u, C, G @ u)
        du = Ginv @ low
        dX = u + 0.5 * br(X, u)
        return np.concatenate([dX, du])

    n = len(u0)
    state = np.concatenate([np.zeros(n), np.asarray(u0, dtype=float)])
    out = []
    t = 0.0
    for target in t_grid:
        span = target - t
        steps = max(1, int(np.ceil(abs(span) * steps_per_unit)))
        h = span / steps
        for _ in range(steps):
            k1 = rhs(state)
            k2 = rhs(state + 0.5 * h * k1)
            k3 = rhs(state + 0.5 * h * k2)
            k4 = rhs(state + h * k3)
            state = state + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = target
        out.append(state[:n].copy())
    return np.array(out)
