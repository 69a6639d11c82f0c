"""Phase-space dispersion chain of quantum mechanics in one dimension: the
sheared-well exact solution, the oscillator chain, a residual verifier for
the governing equations and a tridiagonal eigensolver."""

from . import eigensolve, numerics, oscillator, special, verify, well
from .errors import (
    AccuracyError,
    CoverageError,
    DomainError,
    NumericError,
    UndefinedFieldError,
)
from .numerics import ChainConstants, Grid1D, PhaseRegion, region_decompose
from .oscillator import OscParams
from .verify import ChainFields, ResidualReport, SampleGrid
from .well import WellParams

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "ChainConstants",
    "ChainFields",
    "CoverageError",
    "DomainError",
    "Grid1D",
    "NumericError",
    "OscParams",
    "PhaseRegion",
    "ResidualReport",
    "SampleGrid",
    "UndefinedFieldError",
    "WellParams",
    "eigensolve",
    "numerics",
    "oscillator",
    "region_decompose",
    "special",
    "verify",
    "well",
]
