"""Closed-form spectrum of ``L_W`` and of its truncated direct sum.

For a block with modes ``(alpha_m, omega_m)`` the eigenvalues are

    lambda = alpha_m + i / (a - b) * (delta_m + 2 k pi),    k in Z,

with the phase ``delta_m = arg(conj(omega_m) * exp(-alpha_m (b - a)))`` on
the branch ``(-pi, pi]``.  The positive factor ``exp(-alpha_m (b - a))``
does not move the argument; it is still evaluated and the equality
``delta_m = arg(conj(omega_m))`` is asserted as a self-check.

Enumeration: within a block, records run over modes then ``k = -k_max ..
k_max``.  Across blocks, :func:`operator_spectrum` sorts by ascending
``|lambda|`` with ties broken by block, mode and Fourier index.
"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .extension import principal_arg, require_valid, simultaneous_eigenbasis
from .hilbert import matrix_exponential

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class EigenvalueRecord:
    value: complex
    block_index: int
    mode_index: int
    fourier_index: int
    delta: float

    def to_dict(self):
        return {
            "block": self.block_index,
            "m": self.mode_index,
            "k": self.fourier_index,
            "re": self.value.real,
            "im": self.value.imag,
            "delta": self.delta,
        }


@dataclass(frozen=True)
class SpectrumSlice:
    records: Tuple[EigenvalueRecord, ...]
    m_max: int
    k_max: int
    complete_modes: bool
    lengths: Tuple[float, ...] = field(default=())

    @property
    def values(self):
        return np.array([r.value for r in self.records], dtype=complex)

    def __len__(self):
        return len(self.records)


def mode_phase(mode, length, check=True):
    """``arg(conj(omega) exp(-alpha * length))`` on ``(-pi, pi]``."""
    factor = np.exp(-mode.alpha * length)
    delta = principal_arg(np.conj(mode.omega) * factor)
    if check and factor > 1e-300:
        bare = principal_arg(np.conj(mode.omega))
        # a branch cut straddle (delta near +-pi) shows up as a 2 pi jump
        diff = abs(delta - bare)
        if min(diff, TWO_PI - diff) > 8 * np.finfo(float).eps * np.pi:
            raise AssertionError(f"positive scaling changed the phase: {delta!r} vs {bare!r}")
    return delta


def block_eigenvalues(block, modes, k_max, block_index=1):
    """Eigenvalue records of one block for ``|k| <= k_max``."""
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    a, b = block.interval.a, block.interval.b
    records = []
    for mode in modes:
        delta = mode_phase(mode, b - a)
        for k in range(-k_max, k_max + 1):
            lam = complex(mode.alpha, (delta + TWO_PI * k) / (a - b) + 0.0)
            records.append(EigenvalueRecord(lam, block_index, mode.m, k, delta))
    return records


def product_phases(block):
    """Phases from eigenvalues of the matrix ``W* exp(-A (b - a))``.

    This is the alternative to evaluating per mode.  It is accurate while
    ``exp(-alpha (b - a))`` stays well above roundoff relative to the
    largest mode, so use it only as a cross-check.
    """
    M = block.W.conj().T @ matrix_exponential(block.A, -block.length)
    return sorted(principal_arg(z) for z in np.linalg.eigvals(M))


def operator_spectrum(instance, k_max, tol=1e-10, residual_tol=1e-9, cluster_tol=1e-8):
    """Truncated spectrum of the direct sum: the tagged union over blocks.

    Raises
    ------
    InvalidBlock
        Carrying the offending :class:`ValidationReport`.
    """
    records = []
    m_max = 0
    for n, block in enumerate(instance.blocks, start=1):
        require_valid(block, tol, n)
        modes = simultaneous_eigenbasis(block, residual_tol, cluster_tol)
        m_max = max(m_max, len(modes))
        records.extend(block_eigenvalues(block, modes, k_max, n))
    records.sort(key=lambda r: (abs(r.value), r.block_index, r.mode_index, r.fourier_index))
    return SpectrumSlice(
        tuple(records),
        m_max=m_max,
        k_max=k_max,
        complete_modes=True,
        lengths=tuple(b.length for b in instance.blocks),
    )


@dataclass
class StructureReport:
    passed: bool
    failures: List[str]

    def to_dict(self):
        return {"passed": self.passed, "failures": list(self.failures)}


def verify_normal_spectrum_structure(slice_, tol=1e-9):
    """Check the shape a normal block's spectrum must have.

    (i) every real part is at least 1; (ii) for a fixed block and mode the
    imaginary parts, ordered by ``k``, step by ``2 pi / (b - a)``; (iii) no
    two records of a mode share ``k`` or a value.
    """
    if not slice_.records:
        raise ValueError("empty spectrum slice")
    failures = []
    groups = {}
    for r in slice_.records:
        if r.value.real < 1.0 - tol:
            failures.append(f"record {r}: real part below 1")
        groups.setdefault((r.block_index, r.mode_index), []).append(r)
    for (n, m), recs in sorted(groups.items()):
        ks = [r.fourier_index for r in recs]
        if len(set(ks)) != len(ks):
            failures.append(f"block {n} mode {m}: repeated Fourier index")
            continue
        recs = sorted(recs, key=lambda r: r.fourier_index)
        vals = [r.value for r in recs]
        if len({(v.real, v.imag) for v in vals}) != len(vals):
            failures.append(f"block {n} mode {m}: repeated eigenvalue")
        if slice_.lengths:
            gap = TWO_PI / slice_.lengths[n - 1]
            for r0, r1 in zip(recs, recs[1:]):
                step = abs(r1.value.imag - r0.value.imag) / (r1.fourier_index - r0.fourier_index)
                if abs(step - gap) > tol * max(1.0, gap):
                    failures.append(
                        f"block {n} mode {m} k={r0.fourier_index}->{r1.fourier_index}: "
                        f"imaginary step {step!r}, expected {gap!r}"
                    )
                if abs(r1.value.real - r0.value.real) > tol * max(1.0, abs(r0.value.real)):
                    failures.append(f"block {n} mode {m}: real part varies with k")
    return StructureReport(not failures, failures)
