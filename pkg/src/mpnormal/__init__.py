"""Finite-dimensional laboratory for multipoint normal first-order operators.

An instance is a finite list of blocks ``(a, b, A, W)``; each block realizes
``u' + A u`` on ``(a, b)`` with the boundary coupling ``u(b) = W u(a)``.
The package computes the spectrum of the direct sum in closed form, decides
Schatten-class membership of the inverse, and cross-checks everything
against independent oracles (characteristic equation, finite differences,
quadrature).
"""

from .errors import (
    BadExponent,
    BoundaryNotZero,
    CommutationViolated,
    DimensionMismatch,
    DivergentTail,
    EmptySpectrum,
    InvalidBlock,
    NonHermitian,
    OrderError,
    ParseError,
    ProbeInSpectrum,
    SingularStencil,
    ValidationError,
)
from .hilbert import (
    Block,
    Instance,
    Interval,
    direct_sum_norm,
    hermitian_eigendecomposition,
    matrix_exponential,
    point_spectrum_union,
)
from .extension import ModePair, ValidationReport, simultaneous_eigenbasis, validate_block
from .spectrum import EigenvalueRecord, SpectrumSlice, block_eigenvalues, operator_spectrum

__version__ = "0.1.0"

__all__ = [
    "BadExponent",
    "Block",
    "BoundaryNotZero",
    "CommutationViolated",
    "DimensionMismatch",
    "DivergentTail",
    "EigenvalueRecord",
    "EmptySpectrum",
    "Instance",
    "Interval",
    "InvalidBlock",
    "ModePair",
    "NonHermitian",
    "OrderError",
    "ParseError",
    "ProbeInSpectrum",
    "SingularStencil",
    "SpectrumSlice",
    "ValidationError",
    "ValidationReport",
    "block_eigenvalues",
    "direct_sum_norm",
    "hermitian_eigendecomposition",
    "matrix_exponential",
    "operator_spectrum",
    "point_spectrum_union",
    "simultaneous_eigenbasis",
    "validate_block",
]
