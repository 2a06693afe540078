"""Numerical toolkit for Radon transforms of densities on star bodies,
fractional derivatives of their section profiles at the origin, and
fractional Laplacians, with a verification harness for the associated
slicing-type inequalities.

Desk scale: grids up to n = 4, Monte Carlo beyond.
"""

__version__ = "0.1.0"

from . import constants, profile

__all__ = ["constants", "profile", "__version__"]
