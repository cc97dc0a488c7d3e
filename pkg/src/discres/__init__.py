"""Counting integer polynomials with small discriminants and resultants."""

from discres.polynomials import (
    IntPolynomial,
    RootFindingError,
    RootSet,
    derivative,
    discriminant,
    discriminant_from_roots,
    evaluate,
    resultant,
    resultant_from_roots,
    roots,
    sort_roots_by_distance,
    sylvester_matrix,
)

__version__ = "0.1.0"
