"""Quaternion algebras, orders, ramification and residue maps."""

from .hilbert import INF, hilbert_symbol, ramification_set
from .order import NotFullRank, Order, OrderReport, extend_scalars, load_algebra, verify_order
from .quaternion import AlgElem, QuatAlgebra, alg_mul, nrd_trd
from .residue import (
    NoIsomorphism,
    NotRamified,
    OrderQuotient,
    PrimeData,
    RamifiedResidueMap,
    ResidueField,
    SplittingMap,
    prime_data,
    quotient_size,
    quotient_size_bruteforce,
    ramified_residue_map,
    splitting_map,
)
