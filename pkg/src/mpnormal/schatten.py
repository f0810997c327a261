"""Singular values of ``L_W^{-1}``, Schatten-class membership, discrete spectrum.

``L_W`` is normal, so the singular values of its inverse are ``1/|lambda|``.
For one mode with ``alpha = lambda_m(A)`` and interval length ``l`` they are

    mu_k = (alpha**2 + (delta + 2 k pi)**2 / l**2) ** (-1/2),    k in Z,

and ``sum_k mu_k**p`` converges iff ``p > 1``.  A finite instance therefore
lies in ``C_p`` iff ``p > 1``.  Claims about the untruncated family are made
only through a :class:`~mpnormal.growth.GrowthModel`.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg
import scipy.special

from .errors import BadExponent, DivergentTail, EmptySpectrum, ProbeInSpectrum
from .extension import require_valid, simultaneous_eigenbasis
from .growth import power_series_converges
from .spectrum import TWO_PI, mode_phase, operator_spectrum


def singular_values_inverse(slice_):
    """``1/|lambda_q|`` over the slice, in descending order."""
    if not slice_.records:
        raise EmptySpectrum("no eigenvalues in slice")
    mu = 1.0 / np.abs(slice_.values)
    return np.sort(mu)[::-1]


def schatten_partial_sum(mu, p):
    """``sum mu**p``, summed from the smallest term up with exact rounding."""
    if p < 1:
        raise BadExponent(f"Schatten exponent must be >= 1, got {p}")
    terms = np.sort(np.asarray(mu, dtype=float)) ** p
    return math.fsum(terms)


def tail_bound(alpha, length, k_max, p):
    """Certified upper bound on ``sum_{|k| > k_max} mu_k**p`` for one mode.

    Uniform in the phase ``delta``: for ``|k| >= 1`` we have
    ``|delta + 2 k pi| >= 2 pi |k| - pi``, so each term is at most
    ``g(|k|)`` with ``g(x) = max(alpha, (2 pi x - pi) / l) ** (-p)``.
    ``g`` is non-increasing, hence ``sum_{k > K} g(k) <= int_K^inf g``, and
    that integral splits into a flat piece (while ``(2 pi x - pi)/l < alpha``)
    and a power piece with a closed form.  Both sides of ``k = 0`` give the
    factor 2.
    """
    if p <= 1:
        raise DivergentTail(f"the k-series diverges for p = {p} <= 1")
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if alpha < 1 or length <= 0:
        raise ValueError("need alpha >= 1 and length > 0")
    y0 = (TWO_PI * k_max - np.pi) / length
    x_cross = (alpha * length / np.pi + 1.0) / 2.0
    flat = alpha ** (-p) * max(0.0, x_cross - k_max)
    start = max(y0, alpha)
    power = length / TWO_PI * start ** (1.0 - p) / (p - 1.0)
    return 2.0 * (flat + power)


def mode_series_bound(alpha, length, p):
    """Upper bound on the whole k-series of one mode, for ``p > 2``.

    The ``k = 0`` term is at most ``alpha**(-p)``.  For ``k != 0``,
    ``|delta + 2 k pi| >= |k| pi`` and ``t**2 + s**2 >= 2 |t s|`` give
    ``mu_k**p <= (2 pi alpha |k| / l) ** (-p/2)``; summing over ``k``
    produces a zeta value.  Summed over all modes this is what makes
    ``A^{-1} in C_{p/2}`` imply ``L_W^{-1} in C_p``.
    """
    if p <= 2:
        raise DivergentTail(f"the comparison series needs p > 2, got {p}")
    return alpha ** (-p) + 2.0 * (TWO_PI * alpha / length) ** (-p / 2) * scipy.special.zeta(p / 2)


@dataclass
class SingularValueSeries:
    mu: np.ndarray
    p: float
    partial_sum: float
    tail_bound: float
    mode_tail_note: bool = False

    def to_dict(self):
        return {
            "p": self.p,
            "mu": [float(x) for x in self.mu],
            "partial_sum": self.partial_sum,
            "tail_bound": self.tail_bound,
            "mode_tail_note": self.mode_tail_note,
        }


@dataclass
class MembershipVerdict:
    verdict: str
    series: SingularValueSeries
    evidence: dict = field(default_factory=dict)

    def to_dict(self):
        return {"verdict": self.verdict, "series": self.series.to_dict(), "evidence": self.evidence}


def _instance_modes(instance, tol):
    out = []
    for n, block in enumerate(instance.blocks, start=1):
        require_valid(block, tol, n)
        for mode in simultaneous_eigenbasis(block):
            out.append((n, block, mode))
    return out


def schatten_series(instance, p, k_max, tol=1e-10, growth_model=None):
    if p < 1:
        raise BadExponent(f"Schatten exponent must be >= 1, got {p}")
    slice_ = operator_spectrum(instance, k_max, tol)
    mu = singular_values_inverse(slice_)
    partial = schatten_partial_sum(mu, p)
    if p > 1:
        tail = math.fsum(
            tail_bound(mode.alpha, block.length, k_max, p) for _, block, mode in _instance_modes(instance, tol)
        )
    else:
        tail = float("inf")
    note = growth_model is not None and growth_model.infinite
    return SingularValueSeries(mu, float(p), partial, tail, note)


def _model_consistency(instance, model):
    issues = []
    for n, block in enumerate(instance.blocks, start=1):
        try:
            lam1, dim = model.lambda1(n), model.dims(n)
        except IndexError:
            issues.append(f"block {n}: beyond the model's table")
            continue
        actual = float(np.linalg.eigvalsh(block.A)[0])
        if not math.isclose(actual, lam1, rel_tol=1e-8, abs_tol=1e-8):
            issues.append(f"block {n}: smallest A-eigenvalue {actual!r}, model says {lam1!r}")
        if block.dim != round(dim):
            issues.append(f"block {n}: dimension {block.dim}, model says {dim!r}")
    return issues


def _growth_verdict(model, p, instance):
    """Verdict for the untruncated family described by ``model``."""
    lo_len, hi_len = model.length_bounds(instance)
    ev = {"length_bounds": [lo_len, hi_len], "infinite_family": model.infinite}
    if not model.infinite:
        ev["reason"] = "the model describes finitely many finite-dimensional blocks"
        return ("converges" if p > 1 else "diverges"), ev
    s = model.lambda1.growth_exponent()
    a = model.dims.growth_exponent()
    ev.update({"lambda1_exponent": s, "dims_exponent": a})

    # minorant: the eigenvalue of mode 1 nearest the real axis has
    # |lambda|^2 <= lambda1(n)^2 + pi^2 / l_n^2
    if lo_len > 0 and (s == 0 or s * p <= 1):
        ev["witness"] = (
            f"sum_n (lambda1(n)^2 + pi^2/{lo_len!r}^2)^(-p/2) diverges: terms ~ n^(-{s * p!r})"
        )
        return "diverges", ev
    if p > 2 and np.isfinite(hi_len) and a is not None and power_series_converges(a - s * p / 2):
        ev["comparison"] = {
            "series": "sum_n d_n lambda1(n)^(-p/2)",
            "term_exponent": a - s * p / 2,
            "per_mode_bound": "alpha^(-p) + 2 (2 pi alpha / h)^(-p/2) zeta(p/2)",
            "h": hi_len,
        }
        return "converges", ev
    ev["reason"] = "neither the comparison series nor a divergent minorant is certified"
    return "inconclusive", ev


def schatten_membership(instance, p, k_max, growth_model=None, tol=1e-10):
    """Decide whether ``L_W^{-1}`` belongs to the Schatten class ``C_p``.

    Returns ``converges`` / ``diverges`` / ``inconclusive``.  Without a
    growth model the answer concerns the finite instance and is exact
    (``p > 1``).  With one, the answer concerns the untruncated family.
    """
    if p < 1:
        raise BadExponent(f"Schatten exponent must be >= 1, got {p}")
    series = schatten_series(instance, p, k_max, tol, growth_model)
    evidence = {
        "p": float(p),
        "k_max": int(k_max),
        "partial_sum": series.partial_sum,
        "tail_bound": series.tail_bound,
        "total_upper": series.partial_sum + series.tail_bound,
        "terms": int(len(series.mu)),
    }
    if p > 1:
        finite = "converges"
    else:
        n, block, mode = _instance_modes(instance, tol)[0]
        c = 1.0 / (mode.alpha + 3.0 * np.pi / block.length)
        evidence["witness"] = f"block {n} mode {mode.m}: mu_k >= {c!r}/|k| for |k| >= 1 (harmonic minorant)"
        finite = "diverges"
    evidence["finite_instance"] = finite

    if growth_model is None:
        return MembershipVerdict(finite, series, evidence)

    model_verdict, model_ev = _growth_verdict(growth_model, p, instance)
    model_ev["consistency_issues"] = _model_consistency(instance, growth_model)
    evidence["growth_model"] = model_ev
    if finite == "diverges" or model_verdict == "diverges":
        verdict = "diverges"
    elif model_verdict == "converges":
        verdict = "converges"
    else:
        verdict = "inconclusive"
    return MembershipVerdict(verdict, series, evidence)


def _nearest_spectral_distance(block, modes, probe):
    """Exact ``dist(probe, spectrum of L_W block)``: per mode, the closest k."""
    a, b = block.interval.a, block.interval.b
    length = b - a
    best = float("inf")
    for mode in modes:
        delta = mode_phase(mode, length)
        # Im lambda_k = -(delta + 2 k pi) / length
        k_star = (-probe.imag * length - delta) / TWO_PI
        for k in (math.floor(k_star), math.ceil(k_star)):
            lam = complex(mode.alpha, (delta + TWO_PI * k) / (a - b))
            best = min(best, abs(probe - lam))
    return best


def resolvent_norm(block, probe, target="extension"):
    """``||(T - probe)^{-1}|| = 1 / dist(probe, spectrum(T))`` for normal ``T``.

    ``target`` selects ``T``: ``"extension"`` is the block of ``L_W``,
    ``"coefficient"`` is ``A`` itself.
    """
    probe = complex(probe)
    if target == "coefficient":
        dist = float(np.min(np.abs(np.linalg.eigvalsh(block.A) - probe)))
    elif target == "extension":
        dist = _nearest_spectral_distance(block, simultaneous_eigenbasis(block), probe)
    else:
        raise ValueError(f"unknown target {target!r}")
    if dist <= 0.0:
        raise ProbeInSpectrum(f"{probe} lies in the spectrum")
    return 1.0 / dist


@dataclass
class DiscreteSpectrumVerdict:
    resolvent_norms: list
    decreasing: bool
    truncation_verdict: str
    model_verdict: Optional[str]
    evidence: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "resolvent_norms": list(self.resolvent_norms),
            "decreasing": self.decreasing,
            "truncation_verdict": self.truncation_verdict,
            "model_verdict": self.model_verdict,
            "evidence": self.evidence,
        }


def discrete_spectrum_check(instance, growth_model=None, lambda_probe=0.0, target="extension", tol=1e-10):
    """Resolvent-norm criterion for a discrete spectrum of the direct sum.

    The direct sum has compact resolvent when every block does and the block
    resolvent norms tend to zero.  On a finite instance we report the norm
    sequence and whether it strictly decreases; with a growth model,
    ``lambda1(n) -> inf`` certifies a discrete spectrum, while a bounded
    ``lambda1`` over infinitely many blocks certifies the opposite.
    """
    probe = complex(lambda_probe)
    if probe.real >= 1.0:
        raise ProbeInSpectrum(f"probe {probe} must have real part below 1")
    for n, block in enumerate(instance.blocks, start=1):
        require_valid(block, tol, n)
    norms = [resolvent_norm(b, probe, target) for b in instance.blocks]
    decreasing = all(y < x for x, y in zip(norms, norms[1:]))
    truncation = "criterion_satisfied" if decreasing else "criterion_fails"
    evidence = {"probe": [probe.real, probe.imag], "target": target, "blocks": len(norms)}

    model_verdict = None
    if growth_model is not None:
        lo_len, hi_len = growth_model.length_bounds(instance)
        s = growth_model.lambda1.growth_exponent()
        evidence["lambda1_exponent"] = s
        if not growth_model.infinite:
            model_verdict = "discrete"
        elif s > 0 and np.isfinite(hi_len):
            model_verdict = "discrete"
        elif s == 0 and (target == "coefficient" or lo_len > 0):
            model_verdict = "not_discrete"
        else:
            model_verdict = "inconclusive"
    return DiscreteSpectrumVerdict(norms, decreasing, truncation, model_verdict, evidence)


def truncation_error(instance, lambda_probe, m, target="coefficient", tol=1e-10):
    """Distance between the resolvent and its first-``m``-blocks truncation.

    ``exact`` is the operator norm of the block-diagonal difference, and
    ``bound`` is the supremum of the dropped block resolvent norms.  The
    two are computed by separate routes.  With target ``coefficient`` the
    exact value is a dense spectral norm.  With ``extension`` it maximizes
    ``1/|probe - lambda|`` over an enumerated spectrum window.
    """
    N = len(instance.blocks)
    if not 1 <= m < N:
        raise ValueError(f"need 1 <= m < {N}, got {m}")
    probe = complex(lambda_probe)
    for n, block in enumerate(instance.blocks, start=1):
        require_valid(block, tol, n)
    dropped = instance.blocks[m:]
    bound = max(resolvent_norm(b, probe, target) for b in dropped)
    if target == "coefficient":
        pieces = [np.zeros((b.dim, b.dim)) for b in instance.blocks[:m]]
        pieces += [np.linalg.inv(b.A - probe * np.eye(b.dim)) for b in dropped]
        exact = float(np.linalg.norm(scipy.linalg.block_diag(*pieces), 2))
    else:
        exact = 0.0
        for b in dropped:
            k_max = int(math.ceil(abs(probe.imag) * b.length / TWO_PI)) + 2
            sub = operator_spectrum(type(instance)((b,)), k_max, tol)
            if np.any(np.abs(sub.values - probe) == 0):
                raise ProbeInSpectrum(f"{probe} lies in the spectrum")
            exact = max(exact, float(np.max(1.0 / np.abs(sub.values - probe))))
    return exact, bound
