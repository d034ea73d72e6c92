"""Hilbert symbols (a, b)_v over Q and the ramification set of (a, b | Q)."""

from __future__ import annotations

from fractions import Fraction

from sympy import factorint, legendre_symbol

from ..exactnum.rational import parse_rational

INF = "inf"


def _square_free_int(x: Fraction) -> int:
    """An integer in the same square class as x."""
    return x.numerator * x.denominator


def _split(x: int, p: int) -> tuple[int, int]:
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k, x


def hilbert_symbol(a, b, v) -> int:
    """(a, b)_v for nonzero rationals a, b and v a prime or ``"inf"``."""
    a, b = parse_rational(a), parse_rational(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if v == INF:
        return -1 if (a < 0 and b < 0) else 1
    p = int(v)
    A, B = _square_free_int(a), _square_free_int(b)
    alpha, u = _split(A, p)
    beta, w = _split(B, p)
    if p == 2:
        def eps(x):
            return ((x - 1) // 2) % 2

        def omega(x):
            return ((x * x - 1) // 8) % 2

        e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= legendre_symbol(u % p, p)
    if alpha % 2:
        sign *= legendre_symbol(w % p, p)
    return sign


def relevant_primes(a, b) -> list[int]:
    a, b = parse_rational(a), parse_rational(b)
    n = 2 * abs(a.numerator * a.denominator * b.numerator * b.denominator)
    return sorted(factorint(n))


def ramification_set(a, b) -> set:
    """Places of Q where (a, b | Q) ramifies; primes as ints, the real place as ``"inf"``."""
    places = {p for p in relevant_primes(a, b) if hilbert_symbol(a, b, p) == -1}
    if hilbert_symbol(a, b, INF) == -1:
        places.add(INF)
    if len(places) % 2:
        raise ArithmeticError(f"odd ramification set {places} for ({a}, {b})")
    return places
