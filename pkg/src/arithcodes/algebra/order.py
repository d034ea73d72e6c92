"""Orders given by explicit Z-bases, with exact verification and discriminants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from ..exactnum.numberfield import NFElem, NumberField, nf_trace
from ..exactnum.rational import det, fmt_rational, inverse, parse_rational, vecmat
from .quaternion import AlgElem, QuatAlgebra


class NotFullRank(ValueError):
    pass


@dataclass(frozen=True)
class OrderReport:
    is_ring: bool
    is_integral: bool
    contains_one: bool
    is_zf_module: bool
    disc_norm: int
    is_maximal: bool

    @property
    def ok(self) -> bool:
        return self.is_ring and self.is_integral and self.contains_one and self.is_zf_module

    def to_dict(self) -> dict:
        return dict(self.__dict__)


class Order:
    """A Z-lattice of rank 4n in A given by a basis, not assumed to be a ring until verified."""

    def __init__(self, alg: QuatAlgebra, basis):
        self.alg = alg
        self.basis = tuple(b if isinstance(b, AlgElem) else alg.from_coords(b) for b in basis)
        n = alg.base.degree
        if len(self.basis) != 4 * n:
            raise NotFullRank(f"need {4 * n} basis elements, got {len(self.basis)}")
        self.matrix = [list(b.coords) for b in self.basis]
        if det(self.matrix) == 0:
            raise NotFullRank("basis elements are linearly dependent")
        self.inverse_matrix = inverse(self.matrix)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def base(self) -> NumberField:
        return self.alg.base

    def coords_of(self, x: AlgElem) -> list[Fraction]:
        return vecmat(x.coords, self.inverse_matrix)

    def contains(self, x: AlgElem) -> bool:
        return all(c.denominator == 1 for c in self.coords_of(x))

    def element(self, coeffs) -> AlgElem:
        """The element sum_i c_i b_i."""
        return self.alg.from_coords(vecmat([parse_rational(c) for c in coeffs], self.matrix))

    @cached_property
    def structure_constants(self) -> list[list[list[Fraction]]]:
        """b_i * b_j on the basis."""
        m = self.rank
        return [[self.coords_of(self.basis[i] * self.basis[j]) for j in range(m)] for i in range(m)]

    @cached_property
    def int_structure_constants(self) -> list[list[list[int]]]:
        sc = self.structure_constants
        if any(c.denominator != 1 for row in sc for cell in row for c in cell):
            raise ValueError("basis is not closed under multiplication")
        return [[[int(c) for c in cell] for cell in row] for row in sc]

    @cached_property
    def trace_pairing(self) -> list[list[Fraction]]:
        """Tr_{F/Q}(trd(b_i * conj(b_j)))."""
        m = self.rank
        out = [[Fraction(0)] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                t = nf_trace((self.basis[i] * self.basis[j].conj()).trd())
                out[i][j] = out[j][i] = t
        return out

    @cached_property
    def disc_norm(self) -> int:
        """|disc(O)| as a norm: |det trace pairing| / Delta_F^4."""
        d = abs(det(self.trace_pairing)) / Fraction(self.base.abs_discriminant) ** 4
        if d.denominator != 1:
            raise ValueError(f"discriminant {d} is not an integer; basis is not an order")
        return int(d)

    @cached_property
    def nrd_forms(self) -> list[list[list[Fraction]]]:
        """For each coordinate k of nrd on the integral basis of F, the symmetric matrix M_k
        with nrd(sum c_i b_i)_k = c^T M_k c."""
        m, n = self.rank, self.base.degree
        forms = [[[Fraction(0)] * m for _ in range(m)] for _ in range(n)]
        for i in range(m):
            for j in range(i, m):
                if i == j:
                    val = self.basis[i].nrd().coords
                else:
                    val = [c / 2 for c in (self.basis[i] * self.basis[j].conj()).trd().coords]
                for k in range(n):
                    forms[k][i][j] = forms[k][j][i] = val[k]
        return forms

    @cached_property
    def trd_forms(self) -> list[list[Fraction]]:
        """trd(b_i) coordinates: trd(sum c_i b_i)_k = sum_i c_i t[k][i]."""
        vals = [b.trd().coords for b in self.basis]
        return [[vals[i][k] for i in range(self.rank)] for k in range(self.base.degree)]

    def verify(self) -> OrderReport:
        return verify_order(self.alg, self.basis)

    def to_config(self) -> dict:
        return {"order_basis": [[fmt_rational(c) for c in b.coords] for b in self.basis]}

    def __repr__(self):
        return f"Order(rank {self.rank} in {self.alg})"


def _is_integral_nf(x: NFElem) -> bool:
    return all(c.denominator == 1 for c in x.coords)


def verify_order(alg: QuatAlgebra, basis) -> OrderReport:
    O = basis if isinstance(basis, Order) else Order(alg, basis)
    is_ring = all(c.denominator == 1 for row in O.structure_constants for cell in row for c in cell)
    is_integral = all(_is_integral_nf(b.nrd()) and _is_integral_nf(b.trd()) for b in O.basis)
    contains_one = O.contains(alg.one())
    F = alg.base
    zf = all(O.contains(b * NFElem(F, tuple(Fraction(int(k == l)) for l in range(F.degree))))
             for b in O.basis for k in range(F.degree))
    try:
        disc = O.disc_norm
    except ValueError:
        disc = 0
    maximal = bool(is_ring and contains_one and disc == alg.reduced_discriminant_norm**2)
    return OrderReport(is_ring, is_integral, contains_one, zf, disc, maximal)


def load_algebra(cfg: dict) -> tuple[NumberField, QuatAlgebra, Order | None]:
    """Build (F, A, O) from a config dict.

    ``a`` and ``b`` are a rational string (element of Q) or a list of n
    rationals on the integral basis; ``order_basis`` rows hold 4n rationals,
    component-major (n coordinates for each of 1, i, j, ij).
    """
    F = NumberField.from_config(cfg["field"]) if "field" in cfg else NumberField.rationals()
    ram = cfg.get("ramified_primes")
    if ram is not None:
        ram = [(int(r), (0, 1)) if not isinstance(r, dict) else (int(r["p"]), tuple(r["g"])) for r in ram]
    A = QuatAlgebra(F, cfg["a"], cfg["b"], ramified_finite=ram, name=cfg.get("name", ""))
    O = Order(A, cfg["order_basis"]) if "order_basis" in cfg else None
    return F, A, O


def extend_scalars(alg: QuatAlgebra, rational_basis) -> Order:
    """Z_F (x) L for a Z-lattice L given by rows of 4 rationals on 1, i, j, ij."""
    F = alg.base
    n = F.degree
    out = []
    for row in rational_basis:
        comps = [parse_rational(c) for c in row]
        for k in range(n):
            w = NFElem(F, tuple(Fraction(int(l == k)) for l in range(n)))
            out.append(AlgElem(alg, tuple(w * c for c in comps)))
    return Order(alg, out)
