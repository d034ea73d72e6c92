"""Explicit rate and distance chains, and the (t, p) feasibility searches built on them."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import mpmath
import sympy

from ..codes import Infeasible
from ..volumes import (PREC_BITS, log_unit_ball_volume, vol_ball_lower_bound,
                       vol_ball_quaternion_closed)

T_STEP = 0.01
MAX_LOG_P_FOR_PRIME = 60.0


def _log_covolume_upper(d: int, n: int, rd_F: float, n_delta: float, ramified_norms=None):
    """log of d^{n/2} (Delta_A/Delta_F)^{1/2} prod_j zeta(j)^n * Phi, with Phi <= 1 unless
    the ramified norms are given (then Phi is exact, local index d at each)."""
    with mpmath.workprec(PREC_BITS):
        log_disc_F = n * mpmath.log(rd_F)
        log_disc_A = d * d * log_disc_F + d * mpmath.log(n_delta)
        lv = mpmath.mpf(n) / 2 * mpmath.log(d) + (log_disc_A - log_disc_F) / 2
        for j in range(2, d + 1):
            lv += n * mpmath.log(mpmath.zeta(j))
        if ramified_norms:
            for Np in ramified_norms:
                for i in range(1, d):
                    if i % d:
                        lv += mpmath.log(1 - mpmath.mpf(Np) ** (-i))
        return lv


def rate_lower_bound_explicit(d: int, n: int, rd_F: float, n_delta: float, t: float, p: int,
                              ramified_norms=None, path: str = "auto", f: int = 1) -> float:
    """Lower bound on (1/N) log_q |C| for the best translate, with s = n primes of norm p^f.

    log mu(B(t)) uses the quaternion closed form when d = 2 (and ``path`` is not
    "general") and the explicit lower bound per place otherwise; F is taken
    totally real and A unramified at the real places. The covolume is bounded
    above via zeta_F(j) <= zeta(j)^n.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    N = d * n
    log_q = d * f * math.log(p)
    with mpmath.workprec(PREC_BITS):
        if d == 2 and path != "general":
            log_b = vol_ball_quaternion_closed(n, 0, 0, t, symbolic=False).log_value
        else:
            log_b = n * vol_ball_lower_bound(1, 1, d, t).log_value
        lc = _log_covolume_upper(d, n, rd_F, n_delta, ramified_norms)
        return float((log_b - lc) / (N * log_q))


def _rate_per_N_mult(d: int, rd_F: float, nd_root: float, t: float) -> float:
    """(1/N) log|C| lower bound in nats, n = 1 representative (all terms scale with n)."""
    with mpmath.workprec(PREC_BITS):
        n_delta = mpmath.mpf(nd_root) ** d
        if d == 2:
            log_b = vol_ball_quaternion_closed(1, 0, 0, t, symbolic=False).log_value
        else:
            log_b = vol_ball_lower_bound(1, 1, d, t).log_value
        lc = _log_covolume_upper(d, 1, rd_F, n_delta)
        return float((log_b - lc) / d)


def _rate_per_N_add(d: int, rd_F: float, nd_root: float, t: float) -> float:
    """d log t - (1/(2nd)) log Delta_A + (1/d) log V_{d^2}, n = 1 representative."""
    with mpmath.workprec(PREC_BITS):
        log_disc_A_per_n = d * d * (mpmath.log(rd_F) + mpmath.log(nd_root))
        return float(d * mpmath.log(t) - log_disc_A_per_n / (2 * d) + log_unit_ball_volume(d * d) / d)


def _grid_search(pred, t0: float, step: float, max_t: float) -> float:
    """Smallest grid point t0 + k step with pred true; pred is monotone in t."""
    def at(k):
        return round(t0 + k * step, 10)

    if pred(at(0)):
        return at(0)
    lo, hi = 0, 1
    while not pred(at(hi)):
        lo, hi = hi, hi * 2
        if at(hi) > max_t:
            raise Infeasible(f"no t <= {max_t} meets the rate target")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(at(mid)):
            hi = mid
        else:
            lo = mid
    return at(hi)


def _next_prime(log_p: float):
    if log_p > MAX_LOG_P_FOR_PRIME:
        return None
    return int(sympy.nextprime(math.ceil(math.exp(log_p)) - 1))


@dataclass
class ParamReport:
    mode: str
    d: int
    n: int
    rd_F: float
    nd_root: float
    t: float
    log_p: float
    p: int | None
    rate_lb: float
    distance_lb: float
    rate_target: float
    distance_target: float
    feasible: bool
    trace: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def c(self) -> float:
        return self.log_p / math.log(self.d)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["c"] = self.c
        return out

    def recheck(self) -> bool:
        """Re-evaluate the chain from the recorded inputs and compare exactly."""
        again = (feasible_params_mult if self.mode == "multiplicative" else feasible_params_add)(
            self.d, self.rd_F, self.nd_root, **self.trace["search"])
        return again.to_dict() == self.to_dict()


def _distance_lb(mode: str, d: int, t: float, log_p: float) -> float:
    """Lower bound on d_R / N with q = p^d and s = n."""
    if mode == "multiplicative":
        return 1 - (math.log(2) + 2 * t) / log_p
    return 1 - (math.log(2 * t) - 0.5 * math.log(d)) / log_p


def _log_p_needed(mode: str, d: int, t: float) -> float:
    if mode == "multiplicative":
        return (math.log(2) + 2 * t) / (1 - 1 / d)
    return (math.log(2 * t) - 0.5 * math.log(d)) / (1 - 1 / d)


def _feasible(mode: str, rate_fn, d: int, rd_F: float, nd_root: float, t_start: float, step: float,
              max_t: float, choose_prime: bool) -> ParamReport:
    if d < 2:
        raise ValueError("d must be >= 2")
    rate_target, dist_target = 1.0, 1.0 / d
    t = _grid_search(lambda x: rate_fn(d, rd_F, nd_root, x) >= rate_target, t_start, step, max_t)
    log_p = _log_p_needed(mode, d, t)
    if mode == "additive" and log_p <= 0:
        log_p = math.log(2)
    p = _next_prime(log_p) if choose_prime else None
    if p is not None:
        log_p = math.log(p)
    rate = rate_fn(d, rd_F, nd_root, t)
    dist = _distance_lb(mode, d, t, log_p)
    notes = ["congruence condition on p for the field tower is assumed, not checked"]
    if p is None:
        notes.append("p reported through log p only")
    trace = {
        "search": {"t_start": t_start, "step": step, "max_t": max_t, "choose_prime": choose_prime},
        "rate_at_t": rate,
        "rate_at_previous_grid_point": (rate_fn(d, rd_F, nd_root, round(t - step, 10))
                                        if t - step >= t_start else None),
        "log_p_needed": _log_p_needed(mode, d, t),
    }
    return ParamReport(mode, d, 1, rd_F, nd_root, t, log_p, p, rate, dist, rate_target, dist_target,
                       rate >= rate_target and dist >= dist_target - 1e-12, trace, notes)


def feasible_params_mult(d: int, rd_F: float, nd_root: float, t_start: float = 1.0, step: float = T_STEP,
                         max_t: float = 1e6, choose_prime: bool = True) -> ParamReport:
    """Smallest grid t with rate bound >= 1 nat per symbol, then log p for d_R/N >= 1/d."""
    return _feasible("multiplicative", _rate_per_N_mult, d, rd_F, nd_root, t_start, step, max_t, choose_prime)


def feasible_params_add(d: int, rd_F: float, nd_root: float, t_start: float = 0.01, step: float = T_STEP,
                        max_t: float = 1e6, choose_prime: bool = True) -> ParamReport:
    """Additive analogue: smallest grid t with the exact volume condition, then log p."""
    return _feasible("additive", _rate_per_N_add, d, rd_F, nd_root, t_start, step, max_t, choose_prime)


def sweep(mode: str, d_values, rd_F: float = 92.37, nd_root: float = 6.0) -> list[ParamReport]:
    fn = feasible_params_mult if mode == "multiplicative" else feasible_params_add
    return [fn(d, rd_F, nd_root, choose_prime=False) for d in d_values]


def reproduce_worked_example(rd_F: float = 92.37, zeta_F2: float = 1.02, s_ratio: float = 1 / 20,
                             t: float = 2.2) -> dict:
    """(2 pi)^{3/2} (sinh 4t - 4t)^{1/2} / (rd_F^{3/2} zeta_F(2)^{s_ratio}) and the alphabet threshold."""
    def ratio(tt):
        return (2 * math.pi) ** 1.5 * math.sqrt(math.sinh(4 * tt) - 4 * tt) / (rd_F**1.5 * zeta_F2**s_ratio)

    threshold = math.exp(math.log(2) + 2 * t)
    return {
        "t": t,
        "ratio": ratio(t),
        "ratio_at_t_1": ratio(1.0),
        "threshold": threshold,
        "threshold_ceil": math.ceil(threshold),
        "log_q0_min_per_s": (1 / s_ratio) * (math.log(2) + 2 * t),
        "ratio_exceeds_one": ratio(t) > 1,
    }
