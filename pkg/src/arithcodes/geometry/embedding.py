"""Infinite places of a quaternion algebra: matrix models, the T2 form and rho."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import mpmath
import numpy as np

from ..algebra.order import Order
from ..algebra.quaternion import AlgElem, QuatAlgebra
from ..exactnum.numberfield import NFElem, nf_trace


class PrecisionLoss(ArithmeticError):
    pass


class NotUnitNorm(ValueError):
    pass


REAL_SPLIT = "real_split"
REAL_RAMIFIED = "real_ramified"
COMPLEX = "complex"


@dataclass(frozen=True)
class Place:
    index: int
    kind: str
    root: complex
    a: complex
    b: complex
    I: np.ndarray
    J: np.ndarray

    @property
    def n(self) -> int:
        """[F_sigma : R]."""
        return 2 if self.kind == COMPLEX else 1

    @property
    def e(self) -> int:
        return 2 if self.kind == REAL_RAMIFIED else 1


def _models(kind: str, a: complex, b: complex) -> tuple[np.ndarray, np.ndarray]:
    if kind == COMPLEX:
        sa, sb = np.sqrt(complex(a)), np.sqrt(complex(b))
        return np.diag([sa, -sa]), sb * np.array([[0, 1], [1, 0]], dtype=complex)
    a, b = a.real, b.real
    if kind == REAL_RAMIFIED:
        sa, sb = np.sqrt(-a), np.sqrt(-b)
        return sa * np.array([[1j, 0], [0, -1j]]), sb * np.array([[0, 1], [-1, 0]], dtype=complex)
    if a > 0:
        sa, sb = np.sqrt(a), np.sqrt(abs(b))
        return np.diag([sa, -sa]), sb * np.array([[0.0, 1.0], [np.sign(b), 0.0]])
    # a < 0 < b: let j play the diagonal role
    sa, sb = np.sqrt(-a), np.sqrt(b)
    return sa * np.array([[0.0, 1.0], [-1.0, 0.0]]), np.diag([sb, -sb])


class EmbeddingData:
    """Numeric models of A (x)_sigma R for every infinite place sigma of F.

    Split real places with sigma(a) > 0 use i -> diag(sqrt a, -sqrt a) and
    j -> sqrt|b| [[0, 1], [sgn b, 0]]; when sigma(a) < 0 < sigma(b) the roles
    of i and j swap. These models make the Frobenius norm equal to
    2 (x0^2 + |a| x1^2 + |b| x2^2 + |ab| x3^2) at every real place.
    """

    def __init__(self, alg: QuatAlgebra, precision_bits: int = 53, tol: float = 1e-10):
        self.alg = alg
        self.precision_bits = precision_bits
        self.tol = tol
        F = alg.base
        roots = F.complex_roots(prec_bits=precision_bits)
        r1, r2 = F.signature
        places = []
        for k, z in enumerate(roots):
            sa = self._eval(alg.a, z)
            sb = self._eval(alg.b, z)
            if k < r1:
                kind = REAL_RAMIFIED if (sa.real < 0 and sb.real < 0) else REAL_SPLIT
                sa, sb = complex(sa.real), complex(sb.real)
            else:
                kind = COMPLEX
            I, J = _models(kind, sa, sb)
            places.append(Place(k, kind, z, sa, sb, I, J))
        self.places = tuple(places)
        self._check()

    @staticmethod
    def _eval(x: NFElem, z: complex) -> complex:
        return complex(sum(float(c) * z**e for e, c in enumerate(x.power_coords())))

    def _check(self):
        for pl in self.places:
            I, J = pl.I, pl.J
            scale = max(1.0, abs(pl.a), abs(pl.b))
            res = max(
                np.abs(I @ I - pl.a * np.eye(2)).max(),
                np.abs(J @ J - pl.b * np.eye(2)).max(),
                np.abs(I @ J + J @ I).max(),
            )
            if res > self.tol * scale:
                raise PrecisionLoss(f"relation residual {res:.3g} at place {pl.index}")

    @property
    def totally_real(self) -> bool:
        return all(pl.kind != COMPLEX for pl in self.places)

    @cached_property
    def sign_pattern(self) -> tuple[int, int] | None:
        """Common (sign sigma(a), sign sigma(b)) over all places, or None if they vary / F is not totally real."""
        if not self.totally_real:
            return None
        pats = {(1 if pl.a.real > 0 else -1, 1 if pl.b.real > 0 else -1) for pl in self.places}
        return pats.pop() if len(pats) == 1 else None

    @property
    def split_places(self) -> list[Place]:
        return [pl for pl in self.places if pl.kind != REAL_RAMIFIED]

    def __repr__(self):
        return f"EmbeddingData({[pl.kind for pl in self.places]})"


def embed(E: EmbeddingData, x: AlgElem, sigma: int) -> np.ndarray:
    pl = E.places[sigma]
    vals = [E._eval(c, pl.root) for c in x.comps]
    if pl.kind == REAL_SPLIT:
        vals = [v.real for v in vals]
    M = vals[0] * np.eye(2) + vals[1] * pl.I + vals[2] * pl.J + vals[3] * (pl.I @ pl.J)
    return M


def frobenius_sq(E: EmbeddingData, M: np.ndarray, sigma: int) -> float:
    """||M||_2^2 with the weight e_sigma (a quaternion place viewed inside M_2(C) already doubles)."""
    return float(np.sum(np.abs(M) ** 2))


def _q_coeffs(alg: QuatAlgebra, signs: tuple[int, int]) -> tuple[NFElem, NFElem, NFElem]:
    sa, sb = signs
    a, b = alg.a * sa, alg.b * sb
    return a, b, a * b


def q_value(E: EmbeddingData, x: AlgElem, y: AlgElem | None = None) -> NFElem:
    """x0 y0 + |a| x1 y1 + |b| x2 y2 + |ab| x3 y3 as an element of F (needs a constant sign pattern)."""
    signs = E.sign_pattern
    if signs is None:
        raise NotImplementedError("exact T2 needs a totally real field with constant signs of a and b")
    y = x if y is None else y
    ca, cb, cab = _q_coeffs(E.alg, signs)
    x0, x1, x2, x3 = x.comps
    y0, y1, y2, y3 = y.comps
    return x0 * y0 + ca * (x1 * y1) + cb * (x2 * y2) + cab * (x3 * y3)


def t2_exact(E: EmbeddingData, x: AlgElem) -> Fraction:
    return 2 * nf_trace(q_value(E, x))


def t2_gram(O: Order, E: EmbeddingData) -> list[list[Fraction]]:
    """Exact Gram matrix of T2 on the order basis: 2 Tr_{F/Q} of the bilinear q form."""
    m = O.rank
    G = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            G[i][j] = G[j][i] = 2 * nf_trace(q_value(E, O.basis[i], O.basis[j]))
    return G


def _real_roots_mp(E: EmbeddingData, prec_bits: int) -> list:
    cache = E.__dict__.setdefault("_mp_roots", {})
    if prec_bits not in cache:
        F = E.alg.base
        with mpmath.workprec(prec_bits):
            roots = mpmath.polyroots(list(reversed(F.poly)), maxsteps=400, extraprec=prec_bits)
            eps = mpmath.mpf(2) ** (-prec_bits // 2)
            real = sorted(mpmath.re(r) for r in roots if abs(mpmath.im(r)) < eps)
        cache[prec_bits] = real[: F.signature[0]]
    return cache[prec_bits]


def place_values(E: EmbeddingData, x: NFElem, prec_bits: int = 200) -> list:
    """sigma(x) at every real place as mpmath numbers at the given precision."""
    pc = x.power_coords()
    if E.alg.base.degree == 1:
        return [mpmath.mpf(pc[0].numerator) / pc[0].denominator]
    with mpmath.workprec(prec_bits):
        return [mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * z**e for e, c in enumerate(pc))
                for z in _real_roots_mp(E, prec_bits)]


def place_grams(O: Order, E: EmbeddingData) -> list[np.ndarray]:
    """Per-place Gram matrices G_sigma of ||sigma(x)||_2^2 on the order basis (T2 Gram = sum n_sigma G_sigma)."""
    m = O.rank
    if E.sign_pattern is None:
        out = []
        for pl in E.places:
            mats = [embed(E, b, pl.index) for b in O.basis]
            G = np.zeros((m, m))
            for i in range(m):
                for j in range(m):
                    G[i, j] = np.real(np.sum(mats[i] * np.conj(mats[j])))
            out.append(G)
        return out
    vals = {}
    for i in range(m):
        for j in range(i, m):
            vals[i, j] = [float(v) for v in place_values(E, q_value(E, O.basis[i], O.basis[j]))]
    out = []
    for k in range(len(E.places)):
        G = np.zeros((m, m))
        for (i, j), v in vals.items():
            G[i, j] = G[j, i] = 2 * v[k]
        out.append(G)
    return out


def rho(E: EmbeddingData, g: AlgElem, prec_bits: int = 200) -> float:
    """max over split places of |a| where sigma(g) has singular values e^{+-a}."""
    if g.nrd() != 1:
        raise NotUnitNorm(f"nrd(g) = {g.nrd()} is not 1")
    return float(max(rho_places(E, g, prec_bits), default=0.0))


def rho_places(E: EmbeddingData, g: AlgElem, prec_bits: int = 200) -> list:
    """Per-place values 1/2 arccosh(||sigma(g)||^2 / 2); ramified places give 0."""
    if E.sign_pattern is not None:
        qs = place_values(E, q_value(E, g), prec_bits)
        out = []
        with mpmath.workprec(prec_bits):
            for pl, qv in zip(E.places, qs):
                if pl.kind == REAL_RAMIFIED:
                    out.append(mpmath.mpf(0))
                else:
                    out.append(mpmath.acosh(max(qv, mpmath.mpf(1))) / 2)
        return out
    out = []
    for pl in E.places:
        if pl.kind == REAL_RAMIFIED:
            out.append(0.0)
            continue
        s = frobenius_sq(E, embed(E, g, pl.index), pl.index)
        out.append(0.5 * float(np.arccosh(max(s / 2, 1.0))))
    return out
