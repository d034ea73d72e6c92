"""LLL reduction of Gram matrices and Fincke-Pohst enumeration with an exact final filter."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..exactnum.rational import parse_rational


class NumericallyDegenerate(ArithmeticError):
    pass


def _to_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(x)
    return parse_rational(x)


def lll_gram(G: Sequence[Sequence], delta: Fraction = Fraction(3, 4)) -> tuple[list[list[int]], list[list[Fraction]]]:
    """LLL on a Gram matrix, in exact rational arithmetic.

    Returns (U, G') with U unimodular and G' = U G U^T; row k of U gives the
    k-th reduced basis vector in terms of the old basis.
    """
    m = len(G)
    G = [[Fraction(x) for x in row] for row in G]
    U = [[int(i == j) for j in range(m)] for i in range(m)]

    def gso():
        mu = [[Fraction(0)] * m for _ in range(m)]
        B = [Fraction(0)] * m
        for i in range(m):
            for j in range(i):
                s = G[i][j] - sum((mu[j][k] * mu[i][k] * B[k] for k in range(j)), Fraction(0))
                mu[i][j] = s / B[j]
            B[i] = G[i][i] - sum((mu[i][k] ** 2 * B[k] for k in range(i)), Fraction(0))
        return mu, B

    k = 1
    mu, B = gso()
    while k < m:
        for j in range(k - 1, -1, -1):
            r = round(mu[k][j])
            if r:
                _reduce(G, U, k, j, r)
                mu, B = gso()
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            U[k], U[k - 1] = U[k - 1], U[k]
            G[k], G[k - 1] = G[k - 1], G[k]
            for row in G:
                row[k], row[k - 1] = row[k - 1], row[k]
            mu, B = gso()
            k = max(k - 1, 1)
    return U, G


def _reduce(G, U, i, j, r):
    """b_i <- b_i - r b_j, updating U and the Gram matrix exactly."""
    m = len(G)
    for c in range(m):
        U[i][c] -= r * U[j][c]
    gii = G[i][i] - 2 * r * G[i][j] + r * r * G[j][j]
    row = [G[i][c] - r * G[j][c] for c in range(m)]
    row[i] = gii
    for c in range(m):
        G[i][c] = row[c]
        G[c][i] = row[c]


def _int_scale(G) -> tuple[list[list[int]], int]:
    L = 1
    for row in G:
        for x in row:
            L = math.lcm(L, Fraction(x).denominator)
    return [[int(Fraction(x) * L) for x in row] for row in G], L


def _quad_values_exact(X: np.ndarray, Gi: list[list[int]]) -> list[int]:
    """x^T Gi x for each row x, exactly (falls back to Python ints on overflow risk)."""
    if len(X) == 0:
        return []
    bound = int(np.abs(X).max()) if X.size else 0
    gmax = max(abs(v) for row in Gi for v in row)
    m = X.shape[1]
    if bound * bound * gmax * m * m < 2**62:
        Ga = np.array(Gi, dtype=np.int64)
        return np.einsum("ki,ij,kj->k", X, Ga, X).tolist()
    Xo = X.astype(object)
    Go = np.array(Gi, dtype=object)
    return list(np.einsum("ki,ij,kj->k", Xo, Go, Xo))


@dataclass
class LatticeEnum:
    """Integer coordinate vectors (rows) on the input basis, sorted lexicographically."""

    coords: np.ndarray
    values: list            # exact quadratic-form values (Fractions) or floats for centred enumeration
    borderline: np.ndarray = field(default_factory=lambda: np.zeros((0, 0), dtype=np.int64))
    nodes: int = 0

    def __len__(self):
        return len(self.coords)


def _cholesky_q(G: np.ndarray, pivot_floor: float) -> tuple[np.ndarray, np.ndarray]:
    """Fincke-Pohst form: Q(x) = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2."""
    m = G.shape[0]
    try:
        R = np.linalg.cholesky(G).T  # upper triangular, G = R^T R
    except np.linalg.LinAlgError as exc:
        raise NumericallyDegenerate("Gram matrix is not numerically positive definite") from exc
    d = np.diag(R) ** 2
    if d.min() < pivot_floor * max(d.max(), 1.0):
        raise NumericallyDegenerate(f"Cholesky pivot {d.min():.3g} below floor")
    u = R / np.diag(R)[:, None]
    return d, u


def _fp_search(d, u, center, budget):
    """All integer x with sum d_i (x_i - c_i + sum_{j>i} u_ij (x_j - c_j))^2 <= budget."""
    m = len(d)
    out = []
    nodes = 0
    x = np.zeros(m, dtype=np.int64)
    eps = 1e-9

    def rec(i, rem):
        nonlocal nodes
        nodes += 1
        s = 0.0
        for j in range(i + 1, m):
            s += u[i, j] * (x[j] - center[j])
        ctr = center[i] - s
        if rem < 0:
            rem = 0.0
        r = math.sqrt(rem / d[i]) + eps
        lo, hi = math.ceil(ctr - r), math.floor(ctr + r)
        if lo > hi:
            return
        if i == 0:
            block = np.zeros((hi - lo + 1, m), dtype=np.int64)
            block[:, 0] = np.arange(lo, hi + 1)
            block[:, 1:] = x[1:]
            out.append(block)
            return
        for xi in range(lo, hi + 1):
            x[i] = xi
            rec(i - 1, rem - d[i] * (xi - ctr) ** 2)
        x[i] = 0

    rec(m - 1, budget)
    if out:
        return np.vstack(out), nodes
    return np.zeros((0, m), dtype=np.int64), nodes


def enumerate_lattice(gram, bound, center=None, slack: float = 1e-9, pivot_floor: float = 1e-12,
                      reduce: bool = True) -> LatticeEnum:
    """All integer vectors x with (x - c)^T G (x - c) <= bound.

    Without a centre the final test is exact in rational arithmetic and the
    result is exactly the set asked for. With a real centre the test is
    numeric; vectors within ``slack`` (relative) of the bound are returned
    separately as ``borderline``.
    """
    G = [[_to_fraction(x) for x in row] for row in gram]
    m = len(G)
    B = _to_fraction(bound)
    if B < 0:
        return LatticeEnum(np.zeros((0, m), dtype=np.int64), [])
    if reduce and m > 1:
        U, Gr = lll_gram(G)
    else:
        U, Gr = [[int(i == j) for j in range(m)] for i in range(m)], G
    Uarr = np.array(U, dtype=np.int64)
    Gf = np.array([[float(x) for x in row] for row in Gr])
    d, u = _cholesky_q(Gf, pivot_floor)
    if center is None:
        c_new = np.zeros(m)
    else:
        c_old = np.asarray(center, dtype=float)
        # x_old = y U  =>  y = x_old U^{-1}
        c_new = np.linalg.solve(Uarr.T.astype(float), c_old)
    budget = float(B) * (1 + 1e-9) + 1e-9
    Y, nodes = _fp_search(d, u, c_new, budget)
    X = Y @ Uarr
    if center is None:
        Gi, L = _int_scale(G)
        vals = _quad_values_exact(X, Gi)
        LB = B * L
        keep = [k for k, v in enumerate(vals) if v <= LB]
        X = X[keep]
        values = [Fraction(vals[k], L) for k in keep]
        order = np.lexsort(X.T[::-1]) if len(X) else np.zeros(0, dtype=np.int64)
        return LatticeEnum(X[order], [values[k] for k in order], nodes=nodes)
    Gfo = np.array([[float(x) for x in row] for row in G])
    diff = X - np.asarray(center, dtype=float)
    vals = np.einsum("ki,ij,kj->k", diff, Gfo, diff)
    Bf = float(B)
    tol = slack * max(Bf, 1.0)
    inside = vals <= Bf - tol
    border = np.abs(vals - Bf) < tol
    Xin, vin = X[inside], vals[inside]
    order = np.lexsort(Xin.T[::-1]) if len(Xin) else np.zeros(0, dtype=np.int64)
    Xb = X[border]
    ob = np.lexsort(Xb.T[::-1]) if len(Xb) else np.zeros(0, dtype=np.int64)
    return LatticeEnum(Xin[order], vin[order].tolist(), Xb[ob], nodes)
