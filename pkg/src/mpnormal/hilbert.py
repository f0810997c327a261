"""Dense complex linear algebra and direct-sum bookkeeping.

Finite Hermitian matrices stand in for the coefficient operators and finite
lists of blocks stand in for the (truncated) direct sum of Hilbert spaces.
The direct sum is block diagonal, so nearly everything here is per-block.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NonHermitian, OrderError


def as_complex_matrix(M, name="matrix"):
    """Return a read-only square complex copy of ``M``."""
    arr = np.array(M, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))

    @property
    def length(self):
        return self.b - self.a

    @property
    def ok(self):
        return bool(np.isfinite(self.a) and np.isfinite(self.b) and self.a < self.b)


@dataclass(frozen=True, eq=False)
class Block:
    """One subinterval with its coefficient ``A`` and boundary coupling ``W``.

    The hypotheses (``A`` Hermitian with spectrum in ``[1, inf)``, ``W``
    unitary, ``WA = AW``) are *not* enforced here; ``validate_block``
    measures them.  Since ``A`` is invertible, ``WA = AW`` is equivalent to
    ``W A^{-1} = A^{-1} W``.
    """

    interval: Interval
    A: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        if not isinstance(self.interval, Interval):
            object.__setattr__(self, "interval", Interval(*self.interval))
        A = as_complex_matrix(self.A, "A")
        W = as_complex_matrix(self.W, "W")
        if A.shape != W.shape:
            raise DimensionMismatch(f"A is {A.shape} but W is {W.shape}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "W", W)

    @property
    def dim(self):
        return self.A.shape[0]

    @property
    def length(self):
        return self.interval.length

    def __eq__(self, other):
        if not isinstance(other, Block):
            return NotImplemented
        return (
            self.interval == other.interval
            and np.array_equal(self.A, other.A)
            and np.array_equal(self.W, other.W)
        )

    __hash__ = None


def order_issues(intervals):
    """Messages for every adjacent pair violating ``b_n < a_{n+1}``."""
    issues = []
    for n in range(1, len(intervals)):
        prev, cur = intervals[n - 1], intervals[n]
        if not prev.b < cur.a:
            issues.append(
                f"blocks {n} and {n + 1}: interval ({prev.a}, {prev.b}) does not end "
                f"before ({cur.a}, {cur.b}) begins"
            )
    return issues


@dataclass(frozen=True, eq=False)
class Instance:
    """Ordered finite list of blocks: a truncation of the multipoint direct sum."""

    blocks: tuple
    growth_model: Optional[object] = None
    tolerances: Optional[dict] = None
    version: str = "1"

    def __post_init__(self):
        blocks = tuple(self.blocks)
        if not blocks:
            raise ValueError("an instance needs at least one block")
        issues = order_issues([b.interval for b in blocks])
        if issues:
            raise OrderError("intervals must be disjoint and increasing", issues)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "tolerances", dict(self.tolerances or {}))

    @property
    def h(self):
        return max(b.length for b in self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.blocks == other.blocks
            and self.growth_model == other.growth_model
            and self.tolerances == other.tolerances
            and self.version == other.version
        )

    __hash__ = None


def hermitian_defect(M):
    return float(np.linalg.norm(M - M.conj().T, 2))


def hermitian_eigendecomposition(M, tol=1e-10):
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of ``M``.

    Raises
    ------
    NonHermitian
        If ``||M - M*||`` exceeds ``tol * max(1, ||M||)``.
    """
    M = np.asarray(M, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(M, 2)))
    defect = hermitian_defect(M)
    if defect > tol * scale:
        raise NonHermitian(f"||M - M*|| = {defect:.3e} exceeds {tol * scale:.3e}")
    # symmetrize so LAPACK sees an exactly Hermitian input
    return np.linalg.eigh(0.5 * (M + M.conj().T))


def matrix_exponential(M, t=1.0, tol=1e-10):
    """``exp(t M)``.

    Hermitian inputs go through the eigendecomposition; anything else uses
    scaling-and-squaring with Pade approximation.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    scale = max(1.0, float(np.linalg.norm(M, 2)))
    if hermitian_defect(M) <= tol * scale:
        lam, V = hermitian_eigendecomposition(M, tol)
        return (V * np.exp(t * lam)) @ V.conj().T
    return scipy.linalg.expm(t * M)


class DirectSumNorm(NamedTuple):
    value: float
    bounded: Optional[bool]


def direct_sum_norm(block_norms: Sequence[float], growth=None):
    """Norm of a block-diagonal operator: the supremum of the block norms.

    On a finite list this is the maximum.  ``growth`` is an optional
    :class:`~mpnormal.growth.Sequence` modelling ``||A_n||`` for the whole
    untruncated family; when given, ``bounded`` says whether the model
    certifies a finite supremum, and an unbounded model reports ``inf``.
    """
    norms = [float(x) for x in block_norms]
    if not norms:
        raise ValueError("need at least one block norm")
    if any(x < 0 for x in norms):
        raise ValueError("operator norms are nonnegative")
    value = max(norms)
    if growth is None:
        return DirectSumNorm(value, None)
    sup = growth.supremum()
    if not np.isfinite(sup):
        return DirectSumNorm(float("inf"), False)
    return DirectSumNorm(max(value, sup), True)


class TaggedEigenvalue(NamedTuple):
    value: complex
    block: int


def point_spectrum_union(block_spectra):
    """Union of per-block point spectra, each value tagged by its block (1-based).

    Coincident values from different blocks are all kept, so the result has
    exactly as many entries as the inputs combined.
    """
    out = []
    for n, spectrum in enumerate(block_spectra, start=1):
        out.extend(TaggedEigenvalue(complex(v), n) for v in spectrum)
    return out
