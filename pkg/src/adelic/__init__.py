"""Exact arithmetic invariants of euclidean lattices and their convex-
geometric counterparts: slopes, successive minima, symmetric-power slope
sequences, transference certificates, Okounkov bodies and roof functions.

All core computations are exact: rationals, rational combinations of logs
of primes, and certified interval refinement for strict comparisons.
"""

__version__ = "0.1.0"

from .exactlog import ExactScalar, LogValue, compare, compare_values, harmonic
from .lattices import EuclideanLattice

__all__ = [
    "__version__",
    "ExactScalar",
    "LogValue",
    "compare",
    "compare_values",
    "harmonic",
    "EuclideanLattice",
]
