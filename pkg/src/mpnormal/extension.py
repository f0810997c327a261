"""Normal-extension hypotheses for a block and the joint eigenbasis of (A, W).

A block ``(a, b, A, W)`` generates a normal operator ``u' + Au`` with
``u(b) = W u(a)`` when ``A`` is self-adjoint with ``A >= I``, ``W`` is
unitary, and ``W`` commutes with ``A^{-1}``.  The last condition is checked
in the equivalent form ``WA = AW``, which needs no inversion.

Positivity is enforced as ``A >= I`` rather than just ``A > 0``: all the
spectral formulas downstream assume the stronger bound.
"""

from dataclasses import dataclass, field
from typing import List

import numpy as np
import scipy.linalg

from .errors import CommutationViolated, DimensionMismatch, InvalidBlock
from .hilbert import hermitian_defect


@dataclass(frozen=True)
class ValidationReport:
    hermitian_defect: float
    positivity_margin: float
    unitarity_defect: float
    commutation_defect: float
    interval_ok: bool
    tol: float
    scale: float
    reasons: List[str] = field(default_factory=list)

    @property
    def verdict(self):
        return "valid" if not self.reasons else "invalid"

    @property
    def valid(self):
        return not self.reasons

    def to_dict(self):
        return {
            "hermitian_defect": self.hermitian_defect,
            "positivity_margin": self.positivity_margin,
            "unitarity_defect": self.unitarity_defect,
            "commutation_defect": self.commutation_defect,
            "interval_ok": self.interval_ok,
            "verdict": self.verdict,
            "reasons": list(self.reasons),
        }


def validate_block(block, tol=1e-10):
    """Measure how far ``block`` is from satisfying the normal-extension hypotheses.

    Defects are absolute operator 2-norms.  A defect passes when it is at
    most ``tol * max(1, ||A||)`` (``tol`` alone for unitarity, which is
    scale free).

    Parameters
    ----------
    block : Block
    tol : float

    Returns
    -------
    ValidationReport
    """
    A, W = block.A, block.W
    if A.shape != W.shape:
        raise DimensionMismatch(f"A is {A.shape} but W is {W.shape}")
    n = A.shape[0]
    scale = max(1.0, float(np.linalg.norm(A, 2)))

    herm = hermitian_defect(A)
    lam_min = float(np.linalg.eigvalsh(0.5 * (A + A.conj().T))[0])
    margin = lam_min - 1.0
    unit = float(np.linalg.norm(W.conj().T @ W - np.eye(n), 2))
    comm = float(np.linalg.norm(W @ A - A @ W, 2))
    interval_ok = block.interval.ok

    reasons = []
    if herm > tol * scale:
        reasons.append(f"A is not Hermitian: ||A - A*|| = {herm:.3e}")
    if margin < -tol * scale:
        reasons.append(f"A is not >= I: smallest eigenvalue {lam_min:.6g}")
    if unit > tol:
        reasons.append(f"W is not unitary: ||W*W - I|| = {unit:.3e}")
    if comm > tol * scale:
        reasons.append(f"W does not commute with A: ||WA - AW|| = {comm:.3e}")
    if not interval_ok:
        reasons.append(f"bad interval ({block.interval.a}, {block.interval.b})")
    return ValidationReport(herm, margin, unit, comm, interval_ok, tol, scale, reasons)


def require_valid(block, tol=1e-10, block_index=None):
    report = validate_block(block, tol)
    if not report.valid:
        where = f"block {block_index}: " if block_index is not None else ""
        raise InvalidBlock(where + "; ".join(report.reasons), report, block_index)
    return report


@dataclass(frozen=True, eq=False)
class ModePair:
    """Joint eigendata: ``A v = alpha v`` and ``W v = omega v``."""

    alpha: float
    omega: complex
    vector: np.ndarray
    m: int

    @property
    def phase(self):
        """``arg(omega)`` on the branch ``(-pi, pi]``."""
        return principal_arg(self.omega)


def principal_arg(z):
    """Argument on ``(-pi, pi]``; ``np.angle`` returns ``-pi`` for ``-1 - 0j``."""
    theta = float(np.angle(z))
    return np.pi if theta <= -np.pi else theta


def _clusters(values, gap):
    groups = [[0]]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] <= gap:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def simultaneous_eigenbasis(block, tol=1e-9, cluster_tol=1e-8):
    """Orthonormal joint eigenbasis of the commuting pair ``(A, W)``.

    ``A`` is diagonalized first; eigenvalues whose consecutive gaps are below
    ``cluster_tol * max(1, ||A||)`` are merged into one eigenspace, and the
    compression of ``W`` to that eigenspace (a normal matrix) is diagonalized
    by a complex Schur decomposition so the vectors stay orthonormal.

    Modes are ordered by ascending ``alpha`` (cluster by cluster) and, inside
    a cluster, by ascending ``arg(omega)`` on ``(-pi, pi]``.

    Raises
    ------
    CommutationViolated
        If any pair residual exceeds ``tol * max(1, ||.||)``.
    """
    A, W = block.A, block.W
    scale = max(1.0, float(np.linalg.norm(A, 2)))
    lam, V = np.linalg.eigh(0.5 * (A + A.conj().T))
    modes = []
    for group in _clusters(lam, cluster_tol * scale):
        Vc = V[:, group]
        Wc = Vc.conj().T @ W @ Vc
        T, Z = scipy.linalg.schur(Wc, output="complex")
        vecs = Vc @ Z
        omegas = np.diag(T)
        found = []
        for j in range(len(group)):
            v = vecs[:, j]
            alpha = float(np.real(np.vdot(v, A @ v)))
            found.append((principal_arg(omegas[j]), alpha, complex(omegas[j]), v))
        found.sort(key=lambda item: item[0])
        modes.extend((alpha, omega, v) for _, alpha, omega, v in found)

    w_scale = max(1.0, float(np.linalg.norm(W, 2)))
    out = []
    for m, (alpha, omega, v) in enumerate(modes, start=1):
        ra = float(np.linalg.norm(A @ v - alpha * v))
        rw = float(np.linalg.norm(W @ v - omega * v))
        if ra > tol * scale or rw > tol * w_scale:
            raise CommutationViolated(
                f"mode {m}: residuals ||Av - av|| = {ra:.3e}, ||Wv - wv|| = {rw:.3e} exceed tolerance"
            )
        v = v.copy()
        v.setflags(write=False)
        out.append(ModePair(alpha, omega, v, m))
    return out
