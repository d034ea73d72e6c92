"""Rational parsing/serialisation and exact linear algebra over Q and F_p."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def parse_rational(value) -> Fraction:
    """Accept ints, Fractions, and ``"p/q"`` / ``"n"`` strings."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact rationals; use a 'p/q' string")
    raise TypeError(f"cannot parse {value!r} as a rational")


def fmt_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[parse_rational(v) for v in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols] for row in a]


def vecmat(v: Sequence, m: Sequence[Sequence]) -> list[Fraction]:
    n = len(m[0])
    out = [Fraction(0)] * n
    for vi, row in zip(v, m):
        if vi:
            for k in range(n):
                out[k] += vi * row[k]
    return out


def transpose(m: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*m)]


def det(m: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        pv = a[c][c]
        result *= pv
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / pv
                row_r, row_c = a[r], a[c]
                for k in range(c, n):
                    row_r[k] -= f * row_c[k]
    return sign * result


def inverse(m: Sequence[Sequence]) -> Matrix:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def trace(m: Sequence[Sequence]) -> Fraction:
    return sum((Fraction(m[i][i]) for i in range(len(m))), Fraction(0))


# --- F_p linear algebra (rows of ints) ---------------------------------------

def rref_mod_p(rows: Sequence[Sequence[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Row-reduced echelon form mod p; returns (nonzero rows, pivot columns)."""
    a = [[x % p for x in row] for row in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    return len(rref_mod_p(rows, p)[1])


def nullspace_mod_p(rows: Sequence[Sequence[int]], p: int, ncols: int | None = None) -> list[list[int]]:
    """Basis of {v : rows . v = 0} mod p."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = rref_mod_p(rows, p) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(red, pivots):
            v[pc] = (-row[fc]) % p
        basis.append(v)
    return basis


def solve_mod_p(rows: Sequence[Sequence[int]], rhs: Sequence[int], p: int) -> list[int] | None:
    """One solution x of ``x . rows = rhs`` (x as row combination), or None."""
    m = len(rows)
    ncols = len(rhs)
    # Solve M^T x = rhs.
    aug = [[rows[i][c] % p for i in range(m)] + [rhs[c] % p] for c in range(ncols)]
    red, pivots = rref_mod_p(aug, p)
    if m in pivots:
        return None
    x = [0] * m
    for row, pc in zip(red, pivots):
        x[pc] = row[m]
    return x


def frac_mod_p(x: Fraction, p: int) -> int:
    if x.denominator % p == 0:
        raise ZeroDivisionError(f"denominator of {x} divisible by {p}")
    return (x.numerator * pow(x.denominator, -1, p)) % p
