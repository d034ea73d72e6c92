"""Dedekind zeta values at integers j >= 2 from the Euler product, with a rigorous error interval."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .numberfield import NumberField
from .polymod import RamifiedPrime, factor_degrees_mod_p

# Explicit prime-counting bounds (Dusart): the lower one holds for x >= 599,
# the upper one for every x > 1.
_DUSART_LOWER_FROM = 599
_DUSART_UPPER_C = 1.2762


class CutoffTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class ZetaValue:
    value: float
    error_bound: float
    prime_cutoff: int
    j: int = 0
    partial_product: float = 0.0
    skipped_primes: tuple[int, ...] = field(default=())

    @property
    def interval(self) -> tuple[float, float]:
        return self.value - self.error_bound, self.value + self.error_bound

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "value": self.value,
            "error_bound": self.error_bound,
            "prime_cutoff": self.prime_cutoff,
            "partial_product": self.partial_product,
            "skipped_primes": list(self.skipped_primes),
        }


def primes_upto(n: int) -> np.ndarray:
    if n < 2:
        return np.array([], dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for k in range(2, int(n**0.5) + 1):
        if sieve[k]:
            sieve[k * k :: k] = False
    return np.nonzero(sieve)[0]


def _log_factor(p: int, j: int) -> float:
    """-log(1 - p^-j), computed without cancellation."""
    return -math.log1p(-float(p) ** (-j))


def _prime_tail_bracket(P: int, pi_P: int, j: int) -> tuple[float, float]:
    """Bounds on sum_{p > P} -log(1 - p^-j), via Stieltjes integration against pi(x)."""

    def g(x):
        return -math.log1p(-(x ** (-j)))

    def pi_hi_over_x(lx):
        return (1.0 + _DUSART_UPPER_C / lx) / lx

    def pi_lo_over_x(lx):
        if lx < math.log(_DUSART_LOWER_FROM):
            return pi_P * math.exp(-lx)
        return max(pi_P * math.exp(-lx), (1.0 + 1.0 / lx) / lx)

    start = float(max(P, 2))
    l0 = math.log(start)

    def integral(pi_over_x):
        # Substituting x = e^l, d(-g) = j x^-j / (1 - x^-j) dl; the integrand
        # pi(x) x^-j is evaluated as (pi(x)/x) * e^{(1-j) l} to avoid overflow.
        def f(u):
            lx = l0 + u
            xj = math.exp(-j * lx)
            return pi_over_x(lx) * j * math.exp((1 - j) * lx) / (1.0 - xj)

        return integrate.quad(f, 0.0, np.inf, epsabs=0.0, epsrel=1e-11, limit=400)

    hi, hi_err = integral(pi_hi_over_x)
    lo, lo_err = integral(pi_lo_over_x)
    boundary = g(start) * pi_P
    lower = max(0.0, lo - lo_err - boundary)
    upper = hi + hi_err - boundary
    return lower, upper


def dedekind_zeta(
    F: NumberField,
    j: int,
    prime_cutoff: int,
    ramified_factors: dict[int, list[int]] | None = None,
    max_relative_error: float = 0.5,
) -> ZetaValue:
    """zeta_F(j) from the Euler product over p <= prime_cutoff.

    ``ramified_factors`` maps a prime dividing disc(poly) to the list of norms
    N(P) of the primes above it; primes left out are skipped and the interval
    is widened by their worst-case Euler factor (at most n ideals of norm >= p).
    The tail over p > prime_cutoff is bracketed with explicit bounds on pi(x);
    for F != Q only the upper bracket is known and the lower one is 0.
    """
    if j < 2:
        raise ValueError("j must be >= 2")
    n = F.degree
    ramified_factors = ramified_factors or {}
    primes = primes_upto(prime_cutoff)
    disc = F.poly_discriminant
    logs = []
    skipped = []
    widen = 0.0
    for p in primes.tolist():
        if disc % p == 0:
            if p in ramified_factors:
                logs.extend(_log_factor(norm, j) for norm in ramified_factors[p])
            else:
                skipped.append(p)
                widen += n * _log_factor(p, j)
            continue
        try:
            degs = factor_degrees_mod_p(F.poly, p)
        except RamifiedPrime:  # pragma: no cover - guarded by the disc test
            skipped.append(p)
            widen += n * _log_factor(p, j)
            continue
        logs.extend(_log_factor(p**dg, j) for dg in degs)
    log_partial = math.fsum(logs)
    lower, upper = _prime_tail_bracket(prime_cutoff, len(primes), j)
    if n > 1:
        lower, upper = 0.0, n * upper
    upper += widen
    mid = 0.5 * (lower + upper)
    half = 0.5 * (upper - lower)
    value = math.exp(log_partial + mid)
    # Floating point cushion on the summed logarithms.
    half += 4e-16 * (len(logs) + 10) * max(1.0, log_partial)
    error = value * math.expm1(half)
    if error > max_relative_error * value:
        raise CutoffTooSmall(f"tail bound {error:.3g} exceeds {max_relative_error} x value at cutoff {prime_cutoff}")
    return ZetaValue(
        value=value,
        error_bound=error,
        prime_cutoff=prime_cutoff,
        j=j,
        partial_product=math.exp(log_partial),
        skipped_primes=tuple(skipped),
    )


def riemann_zeta_power_bound(j: int, n: int) -> float:
    """zeta(j)^n, the upper bound for zeta_F(j) used by the explicit rate chain."""
    from mpmath import zeta

    return float(zeta(j)) ** n
