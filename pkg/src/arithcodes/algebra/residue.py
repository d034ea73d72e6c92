"""Residue maps of orders at primes: O/pO -> M_2(F_q0) and O/P -> F_{q0^2}."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
from sympy import isprime

from ..exactnum import polymod
from ..exactnum.finitefield import FiniteField, ff_make
from ..exactnum.numberfield import NFElem, NumberField
from ..exactnum.polymod import RamifiedPrime
from ..exactnum.rational import frac_mod_p, nullspace_mod_p, rank_mod_p, rref_mod_p, solve_mod_p
from .order import Order
from .quaternion import AlgElem


class NoIsomorphism(ArithmeticError):
    """O/pO did not split as a matrix ring: ramification data upstream is wrong."""


class NotRamified(ValueError):
    pass


@dataclass(frozen=True)
class PrimeData:
    """A prime ideal of Z_F above p, named by a monic irreducible factor g of the defining polynomial mod p."""

    p: int
    g: tuple[int, ...]
    unramified_in_A: bool

    @property
    def f(self) -> int:
        return len(self.g) - 1

    @property
    def q0(self) -> int:
        return self.p**self.f

    def to_dict(self) -> dict:
        return {"p": self.p, "g": list(self.g), "f": self.f, "unramified_in_A": self.unramified_in_A}


def prime_data(alg, p: int, g=None) -> PrimeData:
    """Prime ideal data for p in the base field of ``alg``; g defaults to the first factor mod p."""
    F: NumberField = alg.base
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if F.index % p == 0:
        raise ValueError(f"{p} divides the index [Z_F : Z[theta]]; prime ideals cannot be read off mod p")
    if F.abs_discriminant % p == 0:
        raise RamifiedPrime(f"{p} ramifies in the base field")
    factors = [tuple(h) for h in polymod.irreducible_factors(F.poly, p)]
    if g is None:
        g = factors[0]
    g = tuple(int(c) % p for c in g)
    if g not in factors:
        raise ValueError(f"{list(g)} is not an irreducible factor of the defining polynomial mod {p}")
    return PrimeData(p, g, not alg.is_ramified_at(p, g))


class ResidueField:
    """Z_F / P identified with the canonical field ff_make(p, f) via the smallest root of g."""

    def __init__(self, F: NumberField, prime: PrimeData):
        self.F = F
        self.prime = prime
        self.ff = ff_make(prime.p, prime.f)
        self.root = self.ff.root_of(prime.g)
        # images of the integral basis
        self.basis_images = [self._reduce_power(row) for row in F.integral_basis]

    def _reduce_power(self, coeffs) -> int:
        ff, p = self.ff, self.prime.p
        acc, power = 0, 1
        for c in coeffs:
            c = Fraction(c)
            if c:
                acc = ff.add(acc, ff.mul(frac_mod_p(c, p), power))
            power = ff.mul(power, self.root)
        return acc

    def reduce(self, x: NFElem) -> int:
        ff, p = self.ff, self.prime.p
        acc = 0
        for c, img in zip(x.coords, self.basis_images):
            if c:
                acc = ff.add(acc, ff.mul(frac_mod_p(c, p), img))
        return acc


class OrderQuotient:
    """O / P O as an F_p-algebra of dimension 4f, with coordinates on a complement of P O / pO."""

    def __init__(self, O: Order, prime: PrimeData):
        self.order = O
        self.prime = prime
        p = prime.p
        self.p = p
        F = O.base
        m = O.rank
        sc = O.int_structure_constants
        # P O / pO is spanned by g(theta) * b_i.
        g_theta = F.eval_poly(prime.g)
        rows = []
        for b in O.basis:
            c = O.coords_of(b * g_theta)
            rows.append([frac_mod_p(x, p) for x in c])
        self.sub_rows, self.sub_pivots = rref_mod_p(rows, p)
        self.free = [c for c in range(m) if c not in self.sub_pivots]
        self.dim = len(self.free)
        if self.dim != 4 * prime.f:
            raise NoIsomorphism(f"quotient has dimension {self.dim}, expected {4 * prime.f}")
        D = self.dim
        T = np.zeros((D, D, D), dtype=np.int64)
        for a, ca in enumerate(self.free):
            for b, cb in enumerate(self.free):
                T[a, b] = self.project(sc[ca][cb])
        self.table = T
        self.projection = np.array([self.project([int(i == k) for k in range(m)]) for i in range(m)], dtype=np.int64)

    def project(self, v) -> np.ndarray:
        """Image in quotient coordinates of an integer vector on the order basis."""
        p = self.p
        v = [int(x) % p for x in v]
        for row, pc in zip(self.sub_rows, self.sub_pivots):
            c = v[pc]
            if c:
                v = [(x - c * y) % p for x, y in zip(v, row)]
        return np.array([v[c] for c in self.free], dtype=np.int64)

    def project_elem(self, x: AlgElem) -> np.ndarray:
        return self.project([frac_mod_p(c, self.p) for c in self.order.coords_of(x)])

    def project_many(self, coords: np.ndarray) -> np.ndarray:
        return (np.asarray(coords, dtype=np.int64) % self.p) @ self.projection % self.p

    def mul(self, u, v) -> np.ndarray:
        return np.einsum("a,b,abc->c", np.asarray(u), np.asarray(v), self.table) % self.p

    def left_matrix(self, x) -> np.ndarray:
        """Matrix L with y @ L = x * y."""
        return np.einsum("a,abc->bc", np.asarray(x), self.table) % self.p

    def right_matrix(self, x) -> np.ndarray:
        """Matrix R with y @ R = y * x."""
        return np.einsum("b,abc->ac", np.asarray(x), self.table) % self.p

    @cached_property
    def one(self) -> np.ndarray:
        return self.project_elem(self.order.alg.one())

    @cached_property
    def scalar_basis(self) -> list[np.ndarray]:
        """theta^k * 1 for k < f: an F_p-basis of the centre F_q0."""
        F = self.order.base
        out = []
        for k in range(self.prime.f):
            coeffs = [0] * k + [1]
            s = F.from_power_basis(coeffs)
            out.append(self.project_elem(self.order.alg.one() * s))
        return out

    def elements(self):
        for t in itertools.product(range(self.p), repeat=self.dim):
            yield np.array(t, dtype=np.int64)


def _rank(rows, p) -> int:
    return rank_mod_p([list(map(int, r)) for r in rows], p)


@dataclass
class SplittingMap:
    """iota: O -> M_2(F_q0), surjective with kernel P O."""

    prime: PrimeData
    field: FiniteField
    images: tuple            # images of the order basis, as 2x2 tuples of field elements
    quotient: OrderQuotient
    quotient_images: tuple   # images of the quotient basis
    residue: ResidueField

    def image_coords(self, coeffs) -> tuple:
        """iota(sum c_i b_i) for integer (or p-integral rational) coefficients."""
        ff = self.field
        p = ff.p
        out = [[0, 0], [0, 0]]
        for c, img in zip(coeffs, self.images):
            c = frac_mod_p(Fraction(c), p)
            if c:
                for r in range(2):
                    for s in range(2):
                        out[r][s] = ff.add(out[r][s], ff.mul(c, img[r][s]))
        return tuple(tuple(r) for r in out)

    def image(self, x: AlgElem) -> tuple:
        return self.image_coords(self.quotient.order.coords_of(x))

    def image_quotient(self, u) -> tuple:
        return self.image_coords_q(u)

    def image_coords_q(self, u) -> tuple:
        ff = self.field
        out = [[0, 0], [0, 0]]
        for c, img in zip(u, self.quotient_images):
            c = int(c) % ff.p
            if c:
                for r in range(2):
                    for s in range(2):
                        out[r][s] = ff.add(out[r][s], ff.mul(c, img[r][s]))
        return tuple(tuple(r) for r in out)

    @cached_property
    def image_array(self) -> np.ndarray:
        """Images as an int array (4n, 2, 2); valid for vectorised use when f = 1."""
        return np.array(self.images, dtype=np.int64)

    def images_batch(self, coeffs: np.ndarray) -> np.ndarray:
        """Images of many integer coordinate vectors at once (prime-field case)."""
        if self.field.f != 1:
            return np.array([self.image_coords(c) for c in np.asarray(coeffs).tolist()], dtype=np.int64)
        c = np.asarray(coeffs, dtype=np.int64) % self.field.p
        return np.einsum("ki,irs->krs", c, self.image_array) % self.field.p

    def to_json(self) -> dict:
        ff = self.field

        def enc(x):
            return int(x) if ff.f == 1 else ff.to_poly(x)

        return {
            "prime": self.prime.to_dict(),
            "modulus": list(ff.modulus),
            "images": [[[enc(x) for x in row] for row in img] for img in self.images],
        }


def splitting_map(O: Order, prime: PrimeData) -> SplittingMap:
    """Build iota_P deterministically.

    A zero divisor z of O/PO is found by lexicographic search, the left ideal
    (O/PO)z is a 2-dimensional F_q0-space and left multiplication on it gives
    the 2x2 matrices.
    """
    if not prime.unramified_in_A:
        raise RamifiedPrime(f"{prime.p} ramifies in the algebra")
    p, f = prime.p, prime.f
    Q = OrderQuotient(O, prime)
    D = Q.dim
    res = ResidueField(O.base, prime)
    ff = res.ff

    z = None
    for u in Q.elements():
        if not u.any():
            continue
        if _rank(Q.right_matrix(u), p) < D:
            z = u
            break
    if z is None:
        raise NoIsomorphism(f"O/PO at p={p} has no zero divisors")
    # left ideal Qz: images of basis elements e_a * z
    Lrows, _ = rref_mod_p(Q.right_matrix(z).tolist(), p)
    if len(Lrows) != 2 * f:
        raise NoIsomorphism(f"left ideal of dimension {len(Lrows)} over F_{p}, expected {2 * f}")
    scal = Q.scalar_basis
    v1 = Q.mul(Q.one, z)
    span1 = [Q.mul(c, v1) for c in scal]
    v2 = None
    for row in Lrows:
        cand = np.array(row, dtype=np.int64)
        if _rank(span1 + [cand], p) == f + 1:
            v2 = cand
            break
    if v2 is None:  # pragma: no cover - impossible when dim = 2f
        raise NoIsomorphism("could not find a second F_q0-basis vector")
    span2 = [Q.mul(c, v2) for c in scal]
    lbasis = [list(map(int, v)) for v in span1 + span2]
    if _rank(lbasis, p) != 2 * f:
        raise NoIsomorphism("left ideal basis is degenerate")

    def to_ff(coeffs) -> int:
        acc, power = 0, 1
        for c in coeffs:
            if c:
                acc = ff.add(acc, ff.mul(int(c), power))
            power = ff.mul(power, res.root)
        return acc

    q_images = []
    for a in range(D):
        e = np.zeros(D, dtype=np.int64)
        e[a] = 1
        cols = []
        for v in (v1, v2):
            xv = Q.mul(e, v)
            sol = solve_mod_p(lbasis, list(map(int, xv)), p)
            if sol is None:
                raise NoIsomorphism("left ideal not stable under multiplication")
            cols.append((to_ff(sol[:f]), to_ff(sol[f:])))
        q_images.append(((cols[0][0], cols[1][0]), (cols[0][1], cols[1][1])))

    smap = SplittingMap(prime, ff, (), Q, tuple(q_images), res)
    smap.images = tuple(smap.image_coords_q(Q.projection[i]) for i in range(O.rank))
    _check_splitting(smap)
    return smap


def _flat_fp(ff: FiniteField, m) -> list[int]:
    return [d for row in m for x in row for d in ff.to_poly(x)]


def _check_splitting(smap: SplittingMap) -> None:
    Q, ff = smap.quotient, smap.field
    D = Q.dim
    if _rank([_flat_fp(ff, m) for m in smap.quotient_images], ff.p) != D:
        raise NoIsomorphism("induced map on O/PO is not bijective")
    if smap.image_coords_q(Q.one) != ((1, 0), (0, 1)):
        raise NoIsomorphism("1 does not map to the identity")
    for a in range(D):
        for b in range(D):
            lhs = ff.matmul(smap.quotient_images[a], smap.quotient_images[b])
            if lhs != smap.image_coords_q(Q.table[a, b]):
                raise NoIsomorphism("map is not multiplicative")


def quotient_size(O: Order, smap: SplittingMap, x: AlgElem | None = None, coeffs=None) -> int:
    """|O / (PO + xO)| = q0^(d(d - r)) with r the rank of iota(x)."""
    m = smap.image(x) if x is not None else smap.image_coords(coeffs)
    r = smap.field.rank(m)
    return smap.prime.q0 ** (2 * (2 - r))


def quotient_size_bruteforce(Q: OrderQuotient, u) -> int:
    """|Q / uQ| by listing every product u * y; does not use any splitting map."""
    u = np.asarray(u, dtype=np.int64)
    R = Q.left_matrix(u)
    ys = np.array(list(itertools.product(range(Q.p), repeat=Q.dim)), dtype=np.int64)
    prods = ys @ R % Q.p
    distinct = len({tuple(r) for r in prods.tolist()})
    return Q.p**Q.dim // distinct


@dataclass
class RamifiedResidueMap:
    """O -> O/P = F_{q0^2} at a prime P of O above a ramified prime."""

    prime: PrimeData
    field: FiniteField
    quotient: OrderQuotient
    radical_rows: list
    radical_pivots: list
    free: list
    generator_images: list  # image of each Q/J basis element

    def image_quotient(self, u) -> int:
        p = self.field.p
        v = [int(x) % p for x in u]
        for row, pc in zip(self.radical_rows, self.radical_pivots):
            c = v[pc]
            if c:
                v = [(x - c * y) % p for x, y in zip(v, row)]
        ff = self.field
        acc = 0
        for k, c in enumerate(self.free):
            if v[c]:
                acc = ff.add(acc, ff.mul(v[c], self.generator_images[k]))
        return acc

    def image_coords(self, coeffs) -> int:
        p = self.field.p
        c = [frac_mod_p(Fraction(x), p) for x in coeffs]
        return self.image_quotient(self.quotient.project(c))

    def image(self, x: AlgElem) -> int:
        return self.image_coords(self.quotient.order.coords_of(x))

    def to_json(self) -> dict:
        ff = self.field
        Q = self.quotient
        return {
            "prime": self.prime.to_dict(),
            "modulus": list(ff.modulus),
            "images": [ff.to_poly(self.image_quotient(Q.projection[i])) for i in range(Q.order.rank)],
        }


def ramified_residue_map(O: Order, prime: PrimeData) -> RamifiedResidueMap:
    """The residue map at the unique two-sided prime P above a ramified prime.

    The radical J = P/PO is the kernel of the reduced-trace pairing on O/PO.
    """
    p, f = prime.p, prime.f
    Q = OrderQuotient(O, prime)
    D = Q.dim
    res = ResidueField(O.base, prime)
    # trd of the quotient basis, as F_p digit vectors
    trd_digits = []
    for c in Q.free:
        t = O.basis[c].trd()
        trd_digits.append(res.ff.to_poly(res.reduce(t)))
    trd_digits = np.array(trd_digits, dtype=np.int64)  # (D, f)
    # constraint rows: for each b and digit k, x -> sum_a x_a sum_c T[a,b,c] trd_c[k]
    M = np.einsum("abc,ck->abk", Q.table, trd_digits) % p  # (D, D, f)
    constraints = M.reshape(D, D * f).T.tolist()
    J = nullspace_mod_p(constraints, p, ncols=D)
    if not J:
        raise NotRamified(f"trace form is nondegenerate at p={p}: the prime is unramified")
    if len(J) != 2 * f:
        raise NoIsomorphism(f"radical has dimension {len(J)}, expected {2 * f}")
    for u in J:
        for v in J:
            if Q.mul(u, v).any():
                raise NoIsomorphism("radical does not square to zero")
    jrows, jpiv = rref_mod_p(J, p)
    free = [c for c in range(D) if c not in jpiv]
    ff2 = ff_make(p, 2 * f)

    def reduce_j(v):
        v = [int(x) % p for x in v]
        for row, pc in zip(jrows, jpiv):
            c = v[pc]
            if c:
                v = [(x - c * y) % p for x, y in zip(v, row)]
        return [v[c] for c in free]

    def lift(w):
        v = np.zeros(D, dtype=np.int64)
        for k, c in enumerate(free):
            v[c] = w[k]
        return v

    E = 2 * f
    one = reduce_j(Q.one)
    gen = None
    for t in itertools.product(range(p), repeat=E):
        if not any(t):
            continue
        powers = [one]
        cur = lift(one)
        u = lift(list(t))
        for _ in range(E):
            cur = Q.mul(cur, u)
            powers.append(reduce_j(cur))
        if rank_mod_p(powers[:E], p) == E:
            gen = (t, powers)
            break
    if gen is None:
        raise NoIsomorphism("O/P is not a field of the expected size")
    t, powers = gen
    # minimal polynomial: u^E = sum c_k u^k
    sol = solve_mod_p(powers[:E], powers[E], p)
    minpoly = [(-c) % p for c in sol] + [1]
    root = ff2.root_of(minpoly)
    root_pows = [ff2.pow(root, k) for k in range(E)]
    gen_images = []
    for k in range(E):
        e = [int(k == i) for i in range(E)]
        coeff = solve_mod_p(powers[:E], e, p)
        acc = 0
        for c, rp in zip(coeff, root_pows):
            if c:
                acc = ff2.add(acc, ff2.mul(c, rp))
        gen_images.append(acc)
    rmap = RamifiedResidueMap(prime, ff2, Q, jrows, jpiv, free, gen_images)
    # multiplicativity on the quotient basis
    for a in range(D):
        for b in range(D):
            ea = np.eye(D, dtype=np.int64)[a]
            eb = np.eye(D, dtype=np.int64)[b]
            if rmap.image_quotient(Q.mul(ea, eb)) != ff2.mul(rmap.image_quotient(ea), rmap.image_quotient(eb)):
                raise NoIsomorphism("residue map is not multiplicative")
    if rmap.image_quotient(Q.one) != 1:
        raise NoIsomorphism("1 does not map to 1")
    return rmap

