"""Number fields given by a defining polynomial and a caller-supplied integral basis."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import mpmath
from sympy import Poly, Symbol

from .rational import det, fmt_rational, inverse, parse_rational, vecmat


class InvalidField(ValueError):
    pass


def _poly_mul_mod(a: Sequence[Fraction], b: Sequence[Fraction], f: Sequence[int]) -> list[Fraction]:
    n = len(f) - 1
    prod = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            prod[k] = Fraction(0)
            for i in range(n):
                prod[k - n + i] -= c * f[i]
    return (prod + [Fraction(0)] * n)[:n]


@dataclass(frozen=True, eq=False)
class NumberField:
    """F = Q[X]/(poly) with a Z-basis of the ring of integers.

    ``poly`` holds integer coefficients c0..cn (monic). Rows of
    ``integral_basis`` express each basis element on the power basis
    1, theta, ..., theta^(n-1).
    """

    poly: tuple[int, ...]
    integral_basis: tuple[tuple[Fraction, ...], ...]
    signature: tuple[int, int]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "poly", tuple(int(c) for c in self.poly))
        object.__setattr__(
            self, "integral_basis", tuple(tuple(parse_rational(v) for v in row) for row in self.integral_basis)
        )
        object.__setattr__(self, "signature", tuple(int(s) for s in self.signature))
        n = self.degree
        if self.poly[-1] != 1:
            raise InvalidField("defining polynomial must be monic")
        if len(self.integral_basis) != n or any(len(r) != n for r in self.integral_basis):
            raise InvalidField("integral basis must be n x n")
        r1, r2 = self.signature
        if r1 + 2 * r2 != n:
            raise InvalidField(f"signature {self.signature} incompatible with degree {n}")

    # -- construction helpers ------------------------------------------------

    @classmethod
    def rationals(cls) -> "NumberField":
        return cls((0, 1), ((Fraction(1),),), (1, 0), name="Q")

    @classmethod
    def from_config(cls, cfg: dict) -> "NumberField":
        poly = [int(c) for c in cfg["poly"]]
        n = len(poly) - 1
        basis = cfg.get("integral_basis")
        if basis is None:
            basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        F = cls(tuple(poly), tuple(tuple(parse_rational(v) for v in row) for row in basis),
                tuple(cfg["signature"]), name=cfg.get("name", ""))
        F.verify()
        return F

    def to_config(self) -> dict:
        return {
            "poly": list(self.poly),
            "integral_basis": [[fmt_rational(v) for v in row] for row in self.integral_basis],
            "signature": list(self.signature),
        }

    def __eq__(self, other):
        return isinstance(other, NumberField) and (
            self is other or (self.poly == other.poly and self.integral_basis == other.integral_basis)
        )

    def __hash__(self):
        return hash((self.poly, self.integral_basis))

    def __repr__(self):
        return f"NumberField({self.name or list(self.poly)})"

    # -- invariants ----------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    @cached_property
    def basis_inverse(self) -> list[list[Fraction]]:
        return inverse(self.integral_basis)

    @cached_property
    def poly_discriminant(self) -> int:
        n = self.degree
        s = self._newton_sums()
        d = det([[s[i + j] for j in range(n)] for i in range(n)])
        return int(d)

    def _newton_sums(self) -> list[Fraction]:
        """Power sums of the roots, k = 0 .. 2n-2, by Newton's identities."""
        n = self.degree
        c = self.poly
        s = [Fraction(n)]
        for k in range(1, 2 * n - 1):
            tot = Fraction(-k * c[n - k]) if k <= n else Fraction(0)
            for i in range(1, min(k - 1, n) + 1):
                tot -= c[n - i] * s[k - i]
            s.append(tot)
        return s

    @cached_property
    def trace_form(self) -> list[list[Fraction]]:
        """Tr(w_i w_j) on the integral basis."""
        n = self.degree
        s = self._newton_sums()
        t_pow = [[s[i + j] for j in range(n)] for i in range(n)]
        b = self.integral_basis
        tmp = [vecmat(row, t_pow) for row in b]
        return [[sum((x * y for x, y in zip(tmp[i], b[j])), Fraction(0)) for j in range(n)] for i in range(n)]

    @cached_property
    def discriminant(self) -> int:
        """Signed discriminant of the ring of integers."""
        d = det(self.trace_form)
        if d.denominator != 1:
            raise InvalidField("integral basis trace form is not integral")
        return int(d)

    @property
    def abs_discriminant(self) -> int:
        return abs(self.discriminant)

    @property
    def root_discriminant(self) -> float:
        return self.abs_discriminant ** (1.0 / self.degree)

    @cached_property
    def index(self) -> int:
        """[Z_F : Z[theta]] = 1/|det(integral_basis)|."""
        inv = 1 / abs(det(self.integral_basis))
        if inv.denominator != 1:
            raise InvalidField("integral basis does not contain Z[theta]")
        return int(inv)

    @cached_property
    def mult_table(self) -> list[list[list[Fraction]]]:
        """w_i * w_j on the integral basis."""
        n = self.degree
        b = self.integral_basis
        table = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                prod = _poly_mul_mod(b[i], b[j], self.poly)
                coords = vecmat(prod, self.basis_inverse)
                table[i][j] = table[j][i] = coords
        return table

    def verify(self) -> dict:
        """Ring closure and discriminant consistency checks (raises on failure)."""
        closed = all(c.denominator == 1 for row in self.mult_table for cell in row for c in cell)
        one = vecmat([Fraction(1)] + [Fraction(0)] * (self.degree - 1), self.basis_inverse)
        contains_one = all(c.denominator == 1 for c in one)
        disc_ok = self.poly_discriminant == self.index**2 * self.discriminant
        irreducible = Poly(list(reversed(self.poly)), Symbol("X")).is_irreducible
        report = {
            "ring_closed": closed,
            "contains_one": contains_one,
            "disc_consistent": disc_ok,
            "irreducible": irreducible,
            "discriminant": self.discriminant,
            "index": self.index,
        }
        if not (closed and contains_one and disc_ok and irreducible):
            raise InvalidField(f"integral basis fails verification: {report}")
        r1 = sum(1 for z in self.complex_roots() if abs(z.imag) < 1e-12)
        if r1 != self.signature[0]:
            raise InvalidField(f"declared signature {self.signature} but found {r1} real roots")
        return report

    # -- elements ------------------------------------------------------------

    def element(self, coords) -> "NFElem":
        return NFElem(self, tuple(parse_rational(c) for c in coords))

    def from_power_basis(self, coeffs) -> "NFElem":
        v = [Fraction(0)] * self.degree
        for i, c in enumerate(coeffs):
            v[i] = parse_rational(c)
        return NFElem(self, tuple(vecmat(v, self.basis_inverse)))

    def eval_poly(self, coeffs) -> "NFElem":
        """g(theta) for a polynomial g given constant term first (any degree)."""
        th = self.theta()
        acc = self.zero()
        for c in reversed(list(coeffs)):
            acc = acc * th + self.from_rational(parse_rational(c))
        return acc

    def from_rational(self, x) -> "NFElem":
        return self.from_power_basis([parse_rational(x)])

    def zero(self) -> "NFElem":
        return NFElem(self, (Fraction(0),) * self.degree)

    def one(self) -> "NFElem":
        return self.from_rational(1)

    def theta(self) -> "NFElem":
        if self.degree == 1:
            return self.from_rational(-self.poly[0])
        return self.from_power_basis([0, 1])

    # -- embeddings ----------------------------------------------------------

    def complex_roots(self, prec_bits: int = 53) -> list[complex]:
        """Real roots ascending, then one root per conjugate pair (positive imaginary part)."""
        if self.degree == 1:
            return [complex(-self.poly[0])]
        with mpmath.workprec(max(prec_bits, 53) + 20):
            roots = mpmath.polyroots(list(reversed(self.poly)), maxsteps=200, extraprec=prec_bits)
        roots = [complex(r) for r in roots]
        real = sorted(r.real for r in roots if abs(r.imag) < 1e-12 * max(1.0, abs(r)))
        cplx = sorted((r for r in roots if r.imag > 1e-12 * max(1.0, abs(r))), key=lambda z: (z.real, z.imag))
        return [complex(x) for x in real] + cplx

    @cached_property
    def basis_embeddings(self) -> list[list[complex]]:
        """sigma_k(w_i) for each infinite place k (real places first)."""
        roots = self.complex_roots()
        out = []
        for z in roots:
            out.append([complex(sum(float(c) * z**e for e, c in enumerate(row))) for row in self.integral_basis])
        return out


@dataclass(frozen=True)
class NFElem:
    field: NumberField
    coords: tuple[Fraction, ...]

    def _check(self, other):
        if not isinstance(other, NFElem):
            other = self.field.from_rational(other)
        if other.field is not self.field and other.field != self.field:
            raise ValueError("elements of different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return NFElem(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return NFElem(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElem(self.field, tuple(a * other for a in self.coords))
        other = self._check(other)
        return nf_mul(self.field, self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        return isinstance(other, NFElem) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def as_rational(self) -> Fraction:
        """The value, if this element lies in Q."""
        pb = vecmat(self.coords, self.field.integral_basis)
        if any(pb[1:]):
            raise ValueError("element is not rational")
        return pb[0]

    def power_coords(self) -> list[Fraction]:
        return vecmat(self.coords, self.field.integral_basis)

    def embed(self) -> list[complex]:
        return [sum((float(c) * w for c, w in zip(self.coords, row)), 0j) for row in self.field.basis_embeddings]

    def __repr__(self):
        return f"NFElem({[fmt_rational(c) for c in self.coords]})"


def nf_mul(F: NumberField, x: NFElem, y: NFElem) -> NFElem:
    n = F.degree
    table = F.mult_table
    out = [Fraction(0)] * n
    for i, a in enumerate(x.coords):
        if not a:
            continue
        for j, b in enumerate(y.coords):
            if not b:
                continue
            ab = a * b
            for k, c in enumerate(table[i][j]):
                if c:
                    out[k] += ab * c
    return NFElem(F, tuple(out))


def mult_matrix(F: NumberField, x: NFElem) -> list[list[Fraction]]:
    """Matrix of y -> x*y on the integral basis (column j = x*w_j)."""
    n = F.degree
    cols = []
    for j in range(n):
        e = [Fraction(0)] * n
        e[j] = Fraction(1)
        cols.append(nf_mul(F, x, NFElem(F, tuple(e))).coords)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def nf_norm_trace(F: NumberField, x: NFElem) -> tuple[Fraction, Fraction]:
    m = mult_matrix(F, x)
    return det(m), sum((m[i][i] for i in range(F.degree)), Fraction(0))


def nf_norm(x: NFElem) -> Fraction:
    return nf_norm_trace(x.field, x)[0]


def nf_trace(x: NFElem) -> Fraction:
    return nf_norm_trace(x.field, x)[1]
