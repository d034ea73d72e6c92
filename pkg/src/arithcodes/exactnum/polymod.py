"""Univariate polynomials over F_p.

Polynomials are lists of coefficients from the constant term upwards, with no
trailing zeros (the zero polynomial is ``[]``).
"""

from __future__ import annotations

from collections import Counter
from typing import Sequence

from sympy import factorint


class RamifiedPrime(ValueError):
    """p divides the discriminant, so the reduction is not squarefree."""


def trim(f: Sequence[int], p: int) -> list[int]:
    out = [c % p for c in f]
    while out and out[-1] == 0:
        out.pop()
    return out


def deg(f: Sequence[int]) -> int:
    return len(f) - 1


def add(f, g, p):
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)], p)


def sub(f, g, p):
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n)], p)


def mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out, p)


def divmod_p(f, g, p):
    f = trim(f, p)
    g = trim(g, p)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    r = list(f)
    while len(r) >= len(g):
        shift = len(r) - len(g)
        c = (r[-1] * inv) % p
        q[shift] = c
        for i, b in enumerate(g):
            r[shift + i] = (r[shift + i] - c * b) % p
        r = trim(r, p)
    return trim(q, p), r


def mod(f, g, p):
    return divmod_p(f, g, p)[1]


def monic(f, p):
    f = trim(f, p)
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return [(c * inv) % p for c in f]


def gcd(f, g, p):
    f, g = trim(f, p), trim(g, p)
    while g:
        f, g = g, mod(f, g, p)
    return monic(f, p)


def powmod(f, e: int, m, p):
    result = [1]
    base = mod(f, m, p)
    while e:
        if e & 1:
            result = mod(mul(result, base, p), m, p)
        base = mod(mul(base, base, p), m, p)
        e >>= 1
    return result


def derivative(f, p):
    return trim([i * c for i, c in enumerate(f)][1:], p)


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin's irreducibility test."""
    f = monic(f, p)
    n = deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    for r in factorint(n):
        h = sub(powmod(x, p ** (n // r), f, p), x, p)
        if deg(gcd(f, h, p)) > 0:
            return False
    return not sub(powmod(x, p**n, f, p), x, p)


def distinct_degree_factorization(f: Sequence[int], p: int) -> list[tuple[int, list[int]]]:
    """Split a squarefree monic f into (degree, product of all factors of that degree)."""
    f = monic(f, p)
    out = []
    x = [0, 1]
    h = x
    i = 0
    while deg(f) >= 2 * (i + 1):
        i += 1
        h = powmod(h, p, f, p)
        g = gcd(f, sub(h, x, p), p)
        if deg(g) > 0:
            out.append((i, g))
            f = divmod_p(f, g, p)[0]
            h = mod(h, f, p)
    if deg(f) > 0:
        out.append((deg(f), f))
    return out


def factor_degrees_mod_p(f: Sequence[int], p: int) -> list[int]:
    """Degrees of the irreducible factors of f mod p, sorted, with multiplicity.

    Raises RamifiedPrime when f mod p is not squarefree (p divides disc f).
    """
    fp = trim(f, p)
    if deg(fp) != deg(list(f)):
        raise ValueError("leading coefficient vanishes mod p")
    if deg(gcd(fp, derivative(fp, p), p)) > 0:
        raise RamifiedPrime(f"{p} divides the discriminant of {list(f)}")
    degrees: Counter[int] = Counter()
    for d, g in distinct_degree_factorization(fp, p):
        degrees[d] += deg(g) // d
    return sorted(degrees.elements())


def irreducible_factors(f: Sequence[int], p: int) -> list[list[int]]:
    """Monic irreducible factors of a squarefree f mod p, sorted by (degree, coefficients)."""
    from sympy.polys.domains import ZZ
    from sympy.polys.galoistools import gf_factor_sqf

    high_first = [int(c) % p for c in reversed(list(f))]
    _, factors = gf_factor_sqf(high_first, p, ZZ)
    out = [[int(c) for c in reversed(g)] for g in factors]
    return sorted(out, key=lambda g: (len(g), g[::-1]))
