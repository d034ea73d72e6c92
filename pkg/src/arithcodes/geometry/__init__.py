"""Embeddings, the T2 form, rho, and lattice enumeration."""

from .balls import EnumResult, closed_under_inverse, enumerate_additive_ball, enumerate_units_in_ball, nrd_one_mask
from .embedding import (
    COMPLEX,
    REAL_RAMIFIED,
    REAL_SPLIT,
    EmbeddingData,
    NotUnitNorm,
    PrecisionLoss,
    embed,
    place_grams,
    q_value,
    rho,
    rho_places,
    t2_exact,
    t2_gram,
)
from .lattice import LatticeEnum, NumericallyDegenerate, enumerate_lattice, lll_gram
