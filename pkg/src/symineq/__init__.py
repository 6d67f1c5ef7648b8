"""
symineq - Symmetric-polynomial functionals and randomized inequality verification.

This package provides overflow-safe evaluation of elementary and complete
homogeneous symmetric polynomials, their ratio and parallel-sum functionals,
and a seeded property-verification engine for their concavity and convexity
inequalities (vector, scalar, matrix and Monte Carlo forms).
"""

__version__ = "0.1.0"
