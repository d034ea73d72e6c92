"""Exact arithmetic: rationals, number fields, finite fields, polynomials mod p, zeta values."""

from .finitefield import FiniteField, NotPrime, ff_make
from .numberfield import InvalidField, NFElem, NumberField, nf_mul, nf_norm, nf_norm_trace, nf_trace
from .polymod import RamifiedPrime, factor_degrees_mod_p
from .rational import fmt_rational, parse_rational
from .zeta import CutoffTooSmall, ZetaValue, dedekind_zeta

__all__ = [
    "CutoffTooSmall",
    "FiniteField",
    "InvalidField",
    "NFElem",
    "NotPrime",
    "NumberField",
    "RamifiedPrime",
    "ZetaValue",
    "dedekind_zeta",
    "factor_degrees_mod_p",
    "ff_make",
    "fmt_rational",
    "nf_mul",
    "nf_norm",
    "nf_norm_trace",
    "nf_trace",
    "parse_rational",
]
