"""Haar volumes: compact subgroups, balls B(t), covolumes and the Lenstra ratio.

Everything is computed in log space with mpmath; closed forms are also
exposed as sympy expressions so that constants can be compared exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import sympy

PREC_BITS = 160

REAL, COMPLEX, QUATERNION = "R", "C", "H"
_NE = {REAL: (1, 1), COMPLEX: (2, 1), QUATERNION: (1, 2)}


class ToleranceNotMet(ArithmeticError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    """G = SL_d(D) with D in {R, C, H}."""

    D: str
    d: int

    def __post_init__(self):
        if self.D not in _NE:
            raise ValueError(f"D must be one of R, C, H, got {self.D!r}")
        if self.d < 1:
            raise ValueError("d must be >= 1")

    @property
    def n(self) -> int:
        return _NE[self.D][0]

    @property
    def e(self) -> int:
        return _NE[self.D][1]

    @classmethod
    def from_ne(cls, n: int, e: int, d: int) -> "GroupSpec":
        for D, ne in _NE.items():
            if ne == (n, e):
                return cls(D, d)
        raise ValueError(f"no division algebra with (n, e) = ({n}, {e})")


@dataclass
class VolumeValue:
    value: mpmath.mpf
    log_value: mpmath.mpf
    exactness: str  # closed_form | lower_bound | upper_bound | quadrature
    abs_err: float = 0.0
    symbolic: object = None
    notes: dict = field(default_factory=dict)

    def __float__(self):
        return float(self.value)

    @classmethod
    def from_log(cls, log_value, exactness: str, **kw) -> "VolumeValue":
        with mpmath.workprec(PREC_BITS):
            return cls(mpmath.exp(log_value), mpmath.mpf(log_value), exactness, **kw)

    @classmethod
    def from_symbolic(cls, expr, exactness: str = "closed_form", **kw) -> "VolumeValue":
        with mpmath.workprec(PREC_BITS):
            v = mpmath.mpf(sympy.N(expr, PREC_BITS // 3 + 10))
            return cls(v, mpmath.log(v) if v > 0 else mpmath.ninf, exactness, symbolic=expr, **kw)

    def to_dict(self) -> dict:
        return {
            "value": float(self.value),
            "log_value": float(self.log_value),
            "exactness": self.exactness,
            "abs_err": self.abs_err,
            "symbolic": None if self.symbolic is None else str(self.symbolic),
            **({"notes": self.notes} if self.notes else {}),
        }


# -- compact pieces ---------------------------------------------------------------

def vol_zka_symbolic(spec: GroupSpec):
    d = spec.d
    if spec.D == REAL:
        return sympy.Integer(2) ** (d - 1)
    if spec.D == COMPLEX:
        return (2 * sympy.sqrt(2) * sympy.pi) ** (d - 1) * sympy.sqrt(d)
    return (4 * sympy.sqrt(2) * sympy.pi**2) ** d


def vol_zka(spec: GroupSpec) -> VolumeValue:
    """mu(Z_K(A)) for the centraliser of the Cartan subgroup in K."""
    return VolumeValue.from_symbolic(vol_zka_symbolic(spec))


def macdonald_data(spec: GroupSpec) -> tuple[int, Fraction, int, list[int]]:
    """(r, exponent of 2 in kappa, sqrt factor in kappa, exponents m_k).

    kappa = 2^x * sqrt(s).
    """
    d = spec.d
    if spec.D == REAL:
        if d % 2 == 0:
            r = d // 2
            x = Fraction(d * d, 2) - Fraction(d, 4)
            m = [2 * k - 1 for k in range(1, r)] + [r - 1]
        else:
            r = (d - 1) // 2
            x = Fraction(d * d, 2) + Fraction(d, 4) - Fraction(3, 4)
            m = [2 * k - 1 for k in range(1, r + 1)]
        return r, x, 1, m
    if spec.D == COMPLEX:
        r = d - 1
        return r, Fraction(d * d) + Fraction(d, 2) - Fraction(3, 2), d, list(range(1, r + 1))
    r = d
    return r, Fraction(2 * d * d) + Fraction(d, 2), 1, [2 * k - 1 for k in range(1, r + 1)]


def vol_k_symbolic(spec: GroupSpec):
    r, x, s, m = macdonald_data(spec)
    kappa = sympy.Integer(2) ** sympy.Rational(x.numerator, x.denominator) * sympy.sqrt(s)
    prod = sympy.Integer(1)
    for mk in m:
        prod *= sympy.pi ** (mk + 1) / sympy.factorial(mk)
    return kappa * prod


def log_vol_k(spec: GroupSpec):
    r, x, s, m = macdonald_data(spec)
    with mpmath.workprec(PREC_BITS):
        lv = mpmath.mpf(x.numerator) / x.denominator * mpmath.log(2) + mpmath.log(s) / 2
        for mk in m:
            lv += (mk + 1) * mpmath.log(mpmath.pi) - mpmath.loggamma(mk + 1)
        return lv


def vol_k(spec: GroupSpec) -> VolumeValue:
    """mu(K) for K maximal compact in SL_d(D), from Macdonald's formula."""
    lv = log_vol_k(spec)
    sym = vol_k_symbolic(spec) if spec.d <= 12 else None
    return VolumeValue.from_log(lv, "closed_form", symbolic=sym)


def vol_k_asymptotic_check(D: str, d_max: int = 60) -> list[dict]:
    """log mu(K) against its leading term -(n/4)(e d)^2 log d for d = 2..d_max."""
    if d_max > 60:
        raise ValueError("sweep limited to d <= 60")
    rows = []
    prev = None
    for d in range(2, d_max + 1):
        spec = GroupSpec(D, d)
        lv = float(log_vol_k(spec))
        lead = -(spec.n / 4) * (spec.e * d) ** 2 * math.log(d)
        ratio = lv / lead
        rows.append({"d": d, "log_vol_k": lv, "leading": lead, "ratio": ratio,
                     "increasing": None if prev is None else ratio > prev})
        prev = ratio
    return rows


# -- the interval gadget --------------------------------------------------------

@dataclass
class IntervalFamily:
    k: int
    centers: tuple
    intervals: tuple  # (alpha_i, beta_i) as Fractions

    def check(self) -> dict:
        """The six properties, checked exactly over the box of intervals.

        Each quantity is affine in (a_1, ..., a_k), so its range over the box
        is attained at endpoints and is computed directly.
        """
        k = self.k
        eps = Fraction(1, 4 * (k + 1) ** 2)
        al = [a for a, _ in self.intervals]
        be = [b for _, b in self.intervals]
        sum_lo, sum_hi = sum(al), sum(be)

        def abs_min(lo, hi):
            return Fraction(0) if lo <= 0 <= hi else min(abs(lo), abs(hi))

        p1 = all(max(abs(a), abs(b)) <= 1 for a, b in self.intervals)
        p2 = max(abs(sum_lo), abs(sum_hi)) <= 1
        p3 = all(b - a >= eps for a, b in self.intervals)
        p4 = all(abs_min(al[i] - be[j], be[i] - al[j]) >= eps
                 for i in range(k) for j in range(i + 1, k))
        p5 = all(abs_min(al[i] + sum_lo, be[i] + sum_hi) >= eps for i in range(k))
        count = sum(1 for a in al if a >= Fraction(1, 4))
        p6 = 5 * count >= k + 1
        return {"bounded": p1, "sum_bounded": p2, "length": p3, "separated": p4,
                "sum_separated": p5, "many_large": p6, "large_count": count}

    @property
    def ok(self) -> bool:
        c = self.check()
        return all(v for key, v in c.items() if key != "large_count")


def intervals(k: int) -> IntervalFamily:
    if k < 1:
        raise ValueError("k must be >= 1")
    c = [Fraction(2 * i, k + 1) - 1 for i in range(1, k + 1)]
    if k % 2 == 1:
        c[(k + 1) // 2 - 1] = Fraction(1, k + 1)
    h = Fraction(1, 8 * (k + 1) ** 2)
    fam = IntervalFamily(k, tuple(c), tuple((ci - h, ci + h) for ci in c))
    if not fam.ok:
        raise ArithmeticError(f"interval family for k = {k} fails {fam.check()}")
    return fam


# -- balls ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def _log_ball_lb_const(n: int, e: int, d: int):
    """The t-independent part of the explicit lower bound, in log space."""
    spec = GroupSpec.from_ne(n, e, d)
    with mpmath.workprec(PREC_BITS):
        pref = (d - 1) * mpmath.log(n * e) / 2 + mpmath.log(d) / 2
        lz = mpmath.log(mpmath.mpf(sympy.N(vol_zka_symbolic(spec), 60)))
        return pref - lz + 2 * log_vol_k(spec) - (d - 1) * (d + 2) * n * e * e * mpmath.log(2 * d)


def vol_ball_lower_bound(n: int, e: int, d: int, t) -> VolumeValue:
    """Explicit lower bound for mu(B(t)) in SL_d(D), evaluated literally.

    notes["chain_covers"] says whether 50 m (m + 1) >= d^2 with m = floor(d/5),
    the step that turns the interval count into the exp(d^2 n e^2 t / 200)
    factor; for d < 5 the displayed inequality is used without that support.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if t < 1:
        raise ValueError("t must be >= 1")
    with mpmath.workprec(PREC_BITS):
        lv = _log_ball_lb_const(n, e, d) + mpmath.mpf(d * d * n * e * e) / 200 * mpmath.mpf(t)
    m = d // 5
    return VolumeValue.from_log(lv, "lower_bound", notes={"chain_covers": 50 * m * (m + 1) >= d * d})


def vol_ball_quaternion_symbolic(u: int, r: int, r2: int, t):
    """2^{3u/2 + 5r/2 + 4 r2} pi^{2 r1 + 3 r2} (cosh 2t - 1)^u (sinh 4t - 4t)^{r2}, r1 = u + r."""
    r1 = u + r
    t = sympy.nsimplify(t) if not isinstance(t, sympy.Basic) else t
    const = sympy.Integer(2) ** (sympy.Rational(3 * u, 2) + sympy.Rational(5 * r, 2) + 4 * r2) \
        * sympy.pi ** (2 * r1 + 3 * r2)
    return const * (sympy.cosh(2 * t) - 1) ** u * (sympy.sinh(4 * t) - 4 * t) ** r2


def vol_ball_quaternion_closed(u: int, r: int, r2: int, t, symbolic: bool = True) -> VolumeValue:
    """Closed-form mu(B(t)) for quaternion algebras; ``symbolic=False`` skips the sympy form (faster sweeps)."""
    if min(u, r, r2) < 0:
        raise ValueError("u, r, r2 must be >= 0")
    with mpmath.workprec(PREC_BITS):
        tt = mpmath.mpf(t)
        lv = ((mpmath.mpf(3 * u) / 2 + mpmath.mpf(5 * r) / 2 + 4 * r2) * mpmath.log(2)
              + (2 * (u + r) + 3 * r2) * mpmath.log(mpmath.pi))
        if u:
            lv += u * mpmath.log(mpmath.cosh(2 * tt) - 1)
        if r2:
            lv += r2 * mpmath.log(mpmath.sinh(4 * tt) - 4 * tt)
    sym = vol_ball_quaternion_symbolic(u, r, r2, t) if symbolic else None
    return VolumeValue.from_log(lv, "closed_form", symbolic=sym)


def kak_ball_quadrature(spec: GroupSpec, t, abs_tol: float = 1e-12) -> VolumeValue:
    """mu(B(t)) in SL_2(D) by the KAK integral, D in {R, C}.

    prefactor (ne)^{1/2} sqrt 2 / mu(Z_K(A)) * mu(K)^2 times int_0^t sinh(2a)^{n e^2} da.
    ``abs_tol`` bounds the estimated absolute error of the 1-D integral.
    """
    if spec.d != 2 or spec.D not in (REAL, COMPLEX):
        raise ValueError("quadrature is implemented for SL_2(R) and SL_2(C) only")
    n, e = spec.n, spec.e
    pref_sym = sympy.sqrt(n * e) * sympy.sqrt(2) / vol_zka_symbolic(spec) * vol_k_symbolic(spec) ** 2
    with mpmath.workprec(PREC_BITS):
        tt = mpmath.mpf(t)
        integral, err = mpmath.quad(lambda a: mpmath.sinh(2 * a) ** (n * e * e), [0, tt / 2, tt], error=True)
        if err > abs_tol:
            raise ToleranceNotMet(f"quadrature error {float(err):.3g} above tolerance")
        pref = mpmath.mpf(sympy.N(pref_sym, PREC_BITS // 3 + 10))
        v = pref * integral
        return VolumeValue(v, mpmath.log(v), "quadrature", abs_err=float(pref * err), symbolic=None,
                           notes={"prefactor": str(sympy.simplify(pref_sym))})


# -- covolumes ------------------------------------------------------------------

def _zeta_parts(z):
    if hasattr(z, "error_bound"):
        return mpmath.mpf(z.value), mpmath.mpf(z.error_bound)
    return mpmath.mpf(z), mpmath.mpf(0)


def prasad_volume(d: int, n: int, disc_F: int, local_data, zetas, disc_A=None) -> VolumeValue:
    """mu(G / O^1) = d^{n/2} (Delta_A / Delta_F)^{1/2} prod_{j=2}^d zeta_F(j) * Phi.

    ``local_data``: (N(p), e_p) for every ramified prime p.
    ``zetas``: zeta_F(2), ..., zeta_F(d), as ZetaValues or plain numbers.
    ``disc_A`` defaults to Delta_F^{d^2} prod N(p)^{d^2 (1 - 1/e_p)}.
    The error interval comes from the zeta error bounds (Phi and the
    discriminants are exact).
    """
    zetas = list(zetas)
    if len(zetas) != d - 1:
        raise ValueError(f"need zeta_F(2..{d}), got {len(zetas)} values")
    if disc_A is None:
        da = Fraction(abs(disc_F)) ** (d * d)
        for Np, ep in local_data:
            if d % ep:
                raise ValueError(f"local index {ep} does not divide d = {d}")
            da *= Fraction(Np) ** (d * d - d * d // ep)
        disc_A = da
    phi = Fraction(1)
    for Np, ep in local_data:
        for i in range(1, d):
            if i % ep:
                phi *= 1 - Fraction(1, Np**i)
    with mpmath.workprec(PREC_BITS):
        ratio = mpmath.mpf(Fraction(disc_A).numerator) / Fraction(disc_A).denominator / abs(disc_F)
        base = mpmath.mpf(d) ** (mpmath.mpf(n) / 2) * mpmath.sqrt(ratio) * (mpmath.mpf(phi.numerator) / phi.denominator)
        lo = hi = mid = base
        for z in zetas:
            v, err = _zeta_parts(z)
            mid *= v
            lo *= max(v - err, 0)
            hi *= v + err
        abs_err = float(max(hi - mid, mid - lo))
        return VolumeValue(mid, mpmath.log(mid), "closed_form", abs_err=abs_err,
                           notes={"phi": str(phi), "disc_A": str(disc_A), "phi_free": float(mid / (mpmath.mpf(phi.numerator) / phi.denominator))})


def prasad_quaternion(n: int, disc_F: int, ramified_norms, zeta2) -> VolumeValue:
    """2^{n/2} Delta_F^{3/2} zeta_F(2) prod_{p | delta_A} (N(p) - 1)."""
    v, err = _zeta_parts(zeta2)
    with mpmath.workprec(PREC_BITS):
        prod = 1
        for Np in ramified_norms:
            prod *= Np - 1
        base = mpmath.mpf(2) ** (mpmath.mpf(n) / 2) * mpmath.mpf(abs(disc_F)) ** mpmath.mpf(1.5) * prod
        val = base * v
        return VolumeValue(val, mpmath.log(val), "closed_form", abs_err=float(base * err))


def prasad_quaternion_symbolic(n: int, disc_F: int, ramified_norms, zeta2_sym):
    prod = sympy.Integer(1)
    for Np in ramified_norms:
        prod *= Np - 1
    return sympy.Integer(2) ** sympy.Rational(n, 2) * sympy.Integer(abs(disc_F)) ** sympy.Rational(3, 2) * zeta2_sym * prod


# -- additive construction --------------------------------------------------------

def unit_ball_volume_symbolic(m: int):
    """V_m = pi^{m/2} / Gamma(m/2 + 1), with Gamma at half-integers exact."""
    if m % 2 == 0:
        return sympy.pi ** (m // 2) / sympy.factorial(m // 2)
    # Gamma(m/2 + 1) = m!! / 2^{(m+1)/2} sqrt(pi)
    return sympy.pi ** sympy.Rational(m, 2) * sympy.Integer(2) ** ((m + 1) // 2) / (sympy.factorial2(m) * sympy.sqrt(sympy.pi))


def log_unit_ball_volume(m: int):
    with mpmath.workprec(PREC_BITS):
        return mpmath.mpf(m) / 2 * mpmath.log(mpmath.pi) - mpmath.loggamma(mpmath.mpf(m) / 2 + 1)


@dataclass
class AdditiveVolumes:
    mu_B: VolumeValue
    mu_quot: VolumeValue
    lenstra_lb: VolumeValue

    def to_dict(self) -> dict:
        return {"mu_B": self.mu_B.to_dict(), "mu_quot": self.mu_quot.to_dict(),
                "lenstra_lb": self.lenstra_lb.to_dict()}


def additive_volumes(d: int, n: int, r1: int, r2: int, t, disc_A) -> AdditiveVolumes:
    """mu(B(t)) = 2^{r2 d^2} V_{d^2}^{r1} V_{2d^2}^{r2} t^{d^2 n}, mu(G/O) = sqrt(Delta_A)."""
    if t <= 0:
        raise ValueError("t must be positive")
    if r1 + 2 * r2 != n:
        raise ValueError("signature does not match n")
    m = d * d
    da = Fraction(disc_A)
    with mpmath.workprec(PREC_BITS):
        tt = mpmath.mpf(t)
        lb = (r2 * m * mpmath.log(2) + r1 * log_unit_ball_volume(m) + r2 * log_unit_ball_volume(2 * m)
              + m * n * mpmath.log(tt))
        lq = mpmath.log(mpmath.mpf(da.numerator) / da.denominator) / 2
    sym_t = sympy.nsimplify(t)
    sym_B = (sympy.Integer(2) ** (r2 * m) * unit_ball_volume_symbolic(m) ** r1
             * unit_ball_volume_symbolic(2 * m) ** r2 * sym_t ** (m * n))
    sym_q = sympy.sqrt(sympy.Rational(da.numerator, da.denominator))
    mu_B = VolumeValue.from_log(lb, "closed_form", symbolic=sym_B)
    mu_q = VolumeValue.from_log(lq, "closed_form", symbolic=sym_q)
    return AdditiveVolumes(mu_B, mu_q, VolumeValue.from_log(lb - lq, "closed_form", symbolic=sym_B / sym_q))


def lenstra_lower_bound(mu_B, mu_quot):
    """|C| >= mu(B) / mu(G / Gamma) for the best translate."""
    a, b = (x.value if isinstance(x, VolumeValue) else x for x in (mu_B, mu_quot))
    if a <= 0 or b <= 0:
        raise ValueError("volumes must be positive")
    return a / b


def unit_count_prediction(u: int, r: int, r2: int, t, covolume: VolumeValue) -> mpmath.mpf:
    """mu(B(t)) / mu(G / O^1) for a quaternion algebra."""
    return vol_ball_quaternion_closed(u, r, r2, t, symbolic=False).value / covolume.value
