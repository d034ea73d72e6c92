"""Quaternion algebras (a, b | F) and their elements."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import mpmath

from ..exactnum.numberfield import NFElem, NumberField
from ..exactnum.rational import fmt_rational, parse_rational
from .hilbert import INF, ramification_set


def _as_nf(F: NumberField, v) -> NFElem:
    if isinstance(v, NFElem):
        return v
    if isinstance(v, (list, tuple)):
        return F.element(v)
    return F.from_rational(parse_rational(v))


@dataclass(frozen=True, eq=False)
class QuatAlgebra:
    """(a, b | F): i^2 = a, j^2 = b, ij = -ji.

    ``ramified_finite`` holds pairs (p, g) where g is the factor of the
    defining polynomial mod p naming the prime; over Q it is computed from
    Hilbert symbols when not supplied.
    """

    base: NumberField
    a: NFElem
    b: NFElem
    ramified_finite: tuple[tuple[int, tuple[int, ...]], ...] = field(default=None)
    name: str = ""

    def __post_init__(self):
        F = self.base
        object.__setattr__(self, "a", _as_nf(F, self.a))
        object.__setattr__(self, "b", _as_nf(F, self.b))
        if self.a.is_zero() or self.b.is_zero():
            raise ValueError("a and b must be nonzero")
        if F.degree == 1:
            places = ramification_set(self.a.as_rational(), self.b.as_rational())
            computed = tuple(sorted((p, (0, 1)) for p in places if p != INF))
            if self.ramified_finite is not None:
                given = tuple(sorted((int(p), tuple(g)) for p, g in self.ramified_finite))
                if given != computed:
                    raise ValueError(f"declared ramification {given} disagrees with Hilbert symbols {computed}")
            object.__setattr__(self, "ramified_finite", computed)
        else:
            given = self.ramified_finite or ()
            object.__setattr__(self, "ramified_finite", tuple(sorted((int(p), tuple(g)) for p, g in given)))

    @property
    def degree(self) -> int:
        return 2

    @cached_property
    def place_signs(self) -> list[tuple[int, int]]:
        """Signs of (sigma(a), sigma(b)) at each real place."""
        F = self.base
        r1 = F.signature[0]
        out = []
        roots = F.complex_roots(prec_bits=200)[:r1]
        for z in roots:
            with mpmath.workprec(200):
                sa = sum(mpmath.mpf(c.numerator) / c.denominator * mpmath.mpf(z.real) ** e
                         for e, c in enumerate(self.a.power_coords()))
                sb = sum(mpmath.mpf(c.numerator) / c.denominator * mpmath.mpf(z.real) ** e
                         for e, c in enumerate(self.b.power_coords()))
            out.append((1 if sa > 0 else -1, 1 if sb > 0 else -1))
        return out

    @property
    def ramified_real(self) -> tuple[int, ...]:
        return tuple(k for k, (sa, sb) in enumerate(self.place_signs) if sa < 0 and sb < 0)

    @property
    def ramified_norms(self) -> list[int]:
        return [p ** (len(g) - 1) for p, g in self.ramified_finite]

    @property
    def reduced_discriminant_norm(self) -> int:
        return math.prod(self.ramified_norms)

    @property
    def absolute_discriminant(self) -> int:
        """Delta_A = Delta_F^(d^2) * N(delta_A)^d with d = 2."""
        return self.base.abs_discriminant**4 * self.reduced_discriminant_norm**2

    @property
    def is_division(self) -> bool:
        return bool(self.ramified_finite or self.ramified_real)

    def is_ramified_at(self, p: int, g) -> bool:
        return (int(p), tuple(g)) in set(self.ramified_finite)

    # -- elements ------------------------------------------------------------

    def element(self, x=0, y=0, z=0, w=0) -> "AlgElem":
        F = self.base
        return AlgElem(self, tuple(_as_nf(F, c) for c in (x, y, z, w)))

    def from_coords(self, coords) -> "AlgElem":
        """Flat vector of 4n rationals, component-major."""
        n = self.base.degree
        c = [parse_rational(v) for v in coords]
        if len(c) != 4 * n:
            raise ValueError(f"expected {4 * n} coordinates, got {len(c)}")
        return AlgElem(self, tuple(NFElem(self.base, tuple(c[k * n:(k + 1) * n])) for k in range(4)))

    def one(self) -> "AlgElem":
        return self.element(1)

    def gens(self) -> tuple["AlgElem", "AlgElem", "AlgElem"]:
        return self.element(0, 1), self.element(0, 0, 1), self.element(0, 0, 0, 1)

    def to_config(self) -> dict:
        return {
            "a": [fmt_rational(c) for c in self.a.coords],
            "b": [fmt_rational(c) for c in self.b.coords],
            "ramified_primes": [{"p": p, "g": list(g)} for p, g in self.ramified_finite],
        }

    def __repr__(self):
        if self.base.degree == 1:
            return f"QuatAlgebra({self.a.as_rational()}, {self.b.as_rational()} | Q)"
        return f"QuatAlgebra({self.a}, {self.b} | {self.base})"


@dataclass(frozen=True, eq=False)
class AlgElem:
    alg: QuatAlgebra
    comps: tuple[NFElem, NFElem, NFElem, NFElem]

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(c for comp in self.comps for c in comp.coords)

    def _lift(self, other):
        if isinstance(other, AlgElem):
            return other
        return self.alg.element(other)

    def __add__(self, other):
        other = self._lift(other)
        return AlgElem(self.alg, tuple(x + y for x, y in zip(self.comps, other.comps)))

    __radd__ = __add__

    def __neg__(self):
        return AlgElem(self.alg, tuple(-x for x in self.comps))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgElem(self.alg, tuple(x * other for x in self.comps))
        if isinstance(other, NFElem):
            return AlgElem(self.alg, tuple(x * other for x in self.comps))
        return alg_mul(self.alg, self, other)

    def __rmul__(self, other):
        # scalars are central
        return self.__mul__(other)

    def __eq__(self, other):
        if not isinstance(other, AlgElem):
            try:
                other = self._lift(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def conj(self) -> "AlgElem":
        x, y, z, w = self.comps
        return AlgElem(self.alg, (x, -y, -z, -w))

    def nrd(self) -> NFElem:
        return nrd_trd(self.alg, self)[0]

    def trd(self) -> NFElem:
        return nrd_trd(self.alg, self)[1]

    def inverse(self) -> "AlgElem":
        n = self.nrd()
        if n.is_zero():
            raise ZeroDivisionError("element has zero reduced norm")
        F = self.alg.base
        inv = _nf_inverse(F, n)
        return self.conj() * inv

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __repr__(self):
        parts = []
        for comp, lab in zip(self.comps, ("", "i", "j", "ij")):
            if self.alg.base.degree == 1:
                parts.append(f"{fmt_rational(comp.coords[0])}{lab}")
            else:
                parts.append(f"({', '.join(fmt_rational(c) for c in comp.coords)}){lab}")
        return " + ".join(parts)


def _nf_inverse(F: NumberField, x: NFElem) -> NFElem:
    from ..exactnum.numberfield import mult_matrix
    from ..exactnum.rational import inverse

    m = mult_matrix(F, x)
    inv = inverse(m)
    one = F.one().coords
    # column solve: m . y = 1
    y = [sum((inv[i][k] * one[k] for k in range(F.degree)), Fraction(0)) for i in range(F.degree)]
    return NFElem(F, tuple(y))


def alg_mul(A: QuatAlgebra, u: AlgElem, v: AlgElem) -> AlgElem:
    a, b = A.a, A.b
    x1, y1, z1, w1 = u.comps
    x2, y2, z2, w2 = v.comps
    ab = a * b
    return AlgElem(A, (
        x1 * x2 + a * (y1 * y2) + b * (z1 * z2) - ab * (w1 * w2),
        x1 * y2 + y1 * x2 - b * (z1 * w2) + b * (w1 * z2),
        x1 * z2 + z1 * x2 + a * (y1 * w2) - a * (w1 * y2),
        x1 * w2 + w1 * x2 + y1 * z2 - z1 * y2,
    ))


def nrd_trd(A: QuatAlgebra, u: AlgElem) -> tuple[NFElem, NFElem]:
    x, y, z, w = u.comps
    a, b = A.a, A.b
    nrd = x * x - a * (y * y) - b * (z * z) + (a * b) * (w * w)
    return nrd, x * 2
