"""Finite fields F_{p^f}.

Elements are encoded as ints in [0, q): the base-p digits of the integer are
the coefficients (constant term first) of a polynomial reduced modulo the
field's defining polynomial. The encoding makes elements hashable and lets
codewords serialise as plain integer arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from sympy import isprime

from . import polymod

TABLE_LIMIT = 1 << 20


class NotPrime(ValueError):
    pass


def _digits(x: int, p: int, f: int) -> list[int]:
    out = []
    for _ in range(f):
        x, r = divmod(x, p)
        out.append(r)
    return out


def _undigits(coeffs, p: int) -> int:
    x = 0
    for c in reversed(list(coeffs)):
        x = x * p + (c % p)
    return x


def find_irreducible(p: int, f: int) -> tuple[int, ...]:
    """First monic irreducible of degree f, scanning lower coefficients as base-p integers."""
    if f == 1:
        return (0, 1)
    for m in range(p**f):
        cand = _digits(m, p, f) + [1]
        if cand[0] == 0:
            continue
        if polymod.is_irreducible(cand, p):
            return tuple(cand)
    raise RuntimeError("no irreducible polynomial found")  # unreachable for prime p


@dataclass(frozen=True)
class FiniteField:
    p: int
    f: int
    modulus: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not isprime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.f < 1:
            raise ValueError("extension degree must be >= 1")
        if not self.modulus:
            object.__setattr__(self, "modulus", find_irreducible(self.p, self.f))
        else:
            mod = tuple(c % self.p for c in self.modulus)
            if len(mod) != self.f + 1 or mod[-1] != 1 or not polymod.is_irreducible(list(mod), self.p):
                raise ValueError(f"modulus {self.modulus} is not monic irreducible of degree {self.f} mod {self.p}")
            object.__setattr__(self, "modulus", mod)

    @property
    def q(self) -> int:
        return self.p**self.f

    def __repr__(self):
        return f"GF({self.p}^{self.f})" if self.f > 1 else f"GF({self.p})"

    # -- encoding ------------------------------------------------------------

    def from_poly(self, coeffs) -> int:
        r = polymod.mod(polymod.trim(list(coeffs), self.p), list(self.modulus), self.p)
        return _undigits(r, self.p)

    def to_poly(self, x: int) -> list[int]:
        return _digits(x, self.p, self.f)

    def from_int(self, n: int) -> int:
        return n % self.p

    # -- arithmetic ----------------------------------------------------------

    @cached_property
    def _tables(self):
        if self.f == 1 or self.q > TABLE_LIMIT:
            return None
        q = self.q
        # Find a primitive element deterministically, then build exp/log tables.
        order = q - 1
        from sympy import factorint

        primes = list(factorint(order))
        for g in range(self.p, q):
            if all(self._pow_slow(g, order // r) != 1 for r in primes):
                break
        exp = [0] * (2 * order)
        log = [0] * q
        x = 1
        for k in range(order):
            exp[k] = x
            log[x] = k
            x = self._mul_slow(x, g)
        for k in range(order, 2 * order):
            exp[k] = exp[k - order]
        return exp, log

    def _mul_slow(self, a: int, b: int) -> int:
        pa, pb = self.to_poly(a), self.to_poly(b)
        return _undigits(polymod.mod(polymod.mul(pa, pb, self.p), list(self.modulus), self.p), self.p)

    def _pow_slow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_slow(r, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return r

    def add(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a + b) % self.p
        p = self.p
        return _undigits([x + y for x, y in zip(_digits(a, p, self.f), _digits(b, p, self.f))], p)

    def neg(self, a: int) -> int:
        if self.f == 1:
            return (-a) % self.p
        return _undigits([-x for x in _digits(a, self.p, self.f)], self.p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        t = self._tables
        if t is not None:
            exp, log = t
            return exp[log[a] + log[b]]
        return self._mul_slow(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.f == 1:
            return pow(a, -1, self.p)
        t = self._tables
        if t is not None:
            exp, log = t
            return exp[(self.q - 1 - log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if self.f == 1:
            return pow(a, e, self.p)
        if e < 0:
            a, e = self.inv(a), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def elements(self):
        return range(self.q)

    def root_of(self, poly) -> int:
        """Smallest-encoded root in this field of a polynomial over F_p (coeffs constant-first)."""
        for x in range(self.q):
            acc = 0
            for c in reversed(list(poly)):
                acc = self.add(self.mul(acc, x), c % self.p)
            if acc == 0:
                return x
        raise ValueError(f"{list(poly)} has no root in {self}")

    # -- matrices ------------------------------------------------------------

    def rank(self, rows) -> int:
        a = [list(r) for r in rows]
        if not a:
            return 0
        nrows, ncols = len(a), len(a[0])
        rank = 0
        for c in range(ncols):
            piv = next((i for i in range(rank, nrows) if a[i][c]), None)
            if piv is None:
                continue
            a[rank], a[piv] = a[piv], a[rank]
            inv = self.inv(a[rank][c])
            a[rank] = [self.mul(x, inv) for x in a[rank]]
            for i in range(nrows):
                if i != rank and a[i][c]:
                    f = a[i][c]
                    a[i] = [self.sub(x, self.mul(f, y)) for x, y in zip(a[i], a[rank])]
            rank += 1
            if rank == nrows:
                break
        return rank

    def det2(self, m) -> int:
        return self.sub(self.mul(m[0][0], m[1][1]), self.mul(m[0][1], m[1][0]))

    def matmul(self, a, b):
        n, k, m = len(a), len(b), len(b[0])
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = 0
                for t in range(k):
                    acc = self.add(acc, self.mul(a[i][t], b[t][j]))
                row.append(acc)
            out.append(tuple(row))
        return tuple(out)


def ff_make(p: int, f: int = 1) -> FiniteField:
    return FiniteField(p, f)
