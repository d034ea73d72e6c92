"""Balls in the unit group and in the order: Gamma cap B(t) and O cap (c + B(t))."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import mpmath
import numpy as np

from ..algebra.order import Order
from ..exactnum.rational import fmt_rational
from .embedding import REAL_RAMIFIED, EmbeddingData, place_values, place_grams, q_value, t2_gram
from .lattice import _int_scale, _quad_values_exact, enumerate_lattice


@dataclass
class EnumResult:
    """Elements as integer coordinate rows on the order basis, in lexicographic order."""

    order: Order
    coords: np.ndarray
    borderline: np.ndarray
    kind: str
    t: float
    stats: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.coords)

    @cached_property
    def elements(self) -> list:
        return [self.order.element(row) for row in self.coords.tolist()]

    @cached_property
    def borderline_elements(self) -> list:
        return [self.order.element(row) for row in self.borderline.tolist()]

    def coord_set(self) -> set:
        return {tuple(r) for r in self.coords.tolist()}

    def to_jsonl(self) -> str:
        lines = []
        for row, x in zip(self.coords.tolist(), self.elements):
            lines.append(json.dumps({"coords": row, "element": [fmt_rational(c) for c in x.coords]}))
        for row, x in zip(self.borderline.tolist(), self.borderline_elements):
            lines.append(json.dumps({"coords": row, "element": [fmt_rational(c) for c in x.coords],
                                     "borderline": True}))
        return "\n".join(lines) + ("\n" if lines else "")


def _upper_fraction(x, prec_bits: int = 200) -> Fraction:
    """A rational just above the mpmath value x."""
    with mpmath.workprec(prec_bits):
        s = mpmath.nstr(x * (1 + mpmath.mpf(2) ** (-prec_bits // 2)), prec_bits // 3)
    return Fraction(s)


def nrd_one_mask(O: Order, X: np.ndarray) -> np.ndarray:
    """Exact test nrd(x) = 1 for integer coordinate rows X."""
    if len(X) == 0:
        return np.zeros(0, dtype=bool)
    one = O.base.one().coords
    mask = np.ones(len(X), dtype=bool)
    for k, Mk in enumerate(O.nrd_forms):
        Mi, L = _int_scale(Mk)
        vals = np.array(_quad_values_exact(X, Mi), dtype=object)
        target = one[k] * L
        mask &= np.array([v == target for v in vals], dtype=bool)
    return mask


def enumerate_units_in_ball(O: Order, E: EmbeddingData, t, slack: float = 1e-9, prec_bits: int = 200,
                            gram=None) -> EnumResult:
    """Gamma cap B(t) with Gamma = {x in O : nrd x = 1} and B(t) = {rho <= t}.

    Lattice points with T2 <= sum_sigma n_sigma 2 cosh(2t) are listed exactly,
    filtered by nrd = 1 exactly, then by rho <= t at every place. Elements
    within ``slack`` (relative) of the boundary are returned as borderline.
    """
    A = O.alg
    if any(pl.kind == REAL_RAMIFIED for pl in E.places):
        raise ValueError("units in B(t) need A unramified at every real place")
    if not A.is_division:
        raise ValueError("A must be a division algebra")
    t_exact = Fraction(t) if not isinstance(t, Fraction) else t
    G = gram if gram is not None else t2_gram(O, E)
    with mpmath.workprec(prec_bits):
        c2t = mpmath.cosh(2 * mpmath.mpf(t_exact.numerator) / t_exact.denominator)
        pre = sum(pl.n for pl in E.places) * 2 * c2t
    bound = _upper_fraction(pre, prec_bits)
    lat = enumerate_lattice(G, bound)
    X = lat.coords
    mask = nrd_one_mask(O, X)
    cand = X[mask]
    cand_t2 = [v for v, keep in zip(lat.values, mask) if keep]
    inside, border = [], []
    n = O.base.degree
    for row, t2 in zip(cand.tolist(), cand_t2):
        if t_exact == 0:
            x = O.element(row)
            (inside if q_value(E, x) == 1 else []).append(row)
            continue
        if n == 1:
            qs = [mpmath.mpf(t2.numerator) / (2 * t2.denominator)]
        else:
            qs = place_values(E, q_value(E, O.element(row)), prec_bits)
        with mpmath.workprec(prec_bits):
            worst = max(qv - c2t for qv in qs)
            if abs(worst) <= slack * c2t:
                border.append(row)
            elif worst < 0:
                inside.append(row)
    m = O.rank
    Xin = np.array(inside, dtype=np.int64).reshape(-1, m)
    Xb = np.array(border, dtype=np.int64).reshape(-1, m)
    stats = {"lattice_points": len(X), "nodes": lat.nodes, "norm_one": len(cand),
             "t2_bound": float(bound), "inside": len(Xin), "borderline": len(Xb)}
    res = EnumResult(O, Xin, Xb, "units", float(t), stats)
    res.stats["closed_under_negation"] = _closed_under_negation(res)
    return res


def _closed_under_negation(res: EnumResult) -> bool:
    s = res.coord_set() | {tuple(r) for r in res.borderline.tolist()}
    return all(tuple(-v for v in r) in s for r in s)


def closed_under_inverse(res: EnumResult) -> bool:
    s = res.coord_set() | {tuple(r) for r in res.borderline.tolist()}
    O = res.order
    for x in res.elements:
        c = O.coords_of(x.conj())
        if tuple(int(v) for v in c) not in s:
            return False
    return True


def enumerate_additive_ball(O: Order, E: EmbeddingData, t, center=None, slack: float = 1e-9,
                            prec_bits: int = 200, gram=None) -> EnumResult:
    """O cap (c + B(t)) with B(t) = {||x_sigma||_2 <= t at every place}.

    ``center`` is a real vector of order-basis coordinates (a point of O (x) R).
    With no centre and n = 1 the test is exact.
    """
    t_exact = Fraction(t) if not isinstance(t, Fraction) else t
    if t_exact <= 0:
        raise ValueError("t must be positive")
    G = gram if gram is not None else t2_gram(O, E)
    nsum = sum(pl.n for pl in E.places)
    bound = nsum * t_exact**2
    n = O.base.degree
    m = O.rank
    if center is None:
        lat = enumerate_lattice(G, bound)
        if n == 1:
            return EnumResult(O, lat.coords, np.zeros((0, m), dtype=np.int64), "additive", float(t),
                              {"lattice_points": len(lat), "nodes": lat.nodes})
        inside, border = [], []
        with mpmath.workprec(prec_bits):
            t2 = mpmath.mpf(t_exact.numerator) ** 2 / t_exact.denominator**2
            for row in lat.coords.tolist():
                qs = place_values(E, q_value(E, O.element(row)), prec_bits)
                worst = max(2 * qv - t2 for qv in qs)
                if abs(worst) <= slack * t2:
                    border.append(row)
                elif worst < 0:
                    inside.append(row)
        return EnumResult(O, np.array(inside, dtype=np.int64).reshape(-1, m),
                          np.array(border, dtype=np.int64).reshape(-1, m), "additive", float(t),
                          {"lattice_points": len(lat), "nodes": lat.nodes})
    c = np.asarray(center, dtype=float)
    lat = enumerate_lattice(G, bound, center=c, slack=slack)
    if n == 1:
        return EnumResult(O, lat.coords, lat.borderline.reshape(-1, m), "additive", float(t),
                          {"lattice_points": len(lat) + len(lat.borderline), "nodes": lat.nodes})
    grams = place_grams(O, E)
    tf = float(t_exact) ** 2
    inside, border = [], [r for r in lat.borderline.reshape(-1, m).tolist()]
    for row in lat.coords.tolist():
        diff = np.array(row, dtype=float) - c
        worst = max(float(diff @ Gs @ diff) - tf for Gs in grams)
        if abs(worst) <= slack * max(tf, 1.0):
            border.append(row)
        elif worst < 0:
            inside.append(row)
    return EnumResult(O, np.array(inside, dtype=np.int64).reshape(-1, m),
                      np.array(border, dtype=np.int64).reshape(-1, m), "additive", float(t),
                      {"lattice_points": len(lat), "nodes": lat.nodes})


def count_in_translate(O: Order, gram, t, center) -> int:
    """|O cap (c + B(t))| for n = 1 (single place), as used by translate averaging."""
    lat = enumerate_lattice(gram, Fraction(t) ** 2 if not isinstance(t, float) else t * t, center=center)
    return len(lat) + len(lat.borderline)

