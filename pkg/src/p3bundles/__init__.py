"""Exact-arithmetic cohomology toolkit for rank-2 bundles on P^3.

Everything in this package computes over the rationals: dimensions are
Python ints, intermediate characteristic-class data are `fractions.Fraction`,
and no floating point is used anywhere.
"""

from p3bundles.chern import ChernCharacter
from p3bundles.tables import CohomologyVector

__all__ = ["ChernCharacter", "CohomologyVector"]
__version__ = "0.1.0"
