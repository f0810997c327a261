"""Command implementations behind the CLI.

Each ``cmd_*`` takes a parsed :class:`~mpnormal.io.RawInstance` and an
:class:`Options` and returns ``(results, exit_code)``.  ``results`` is a
JSON-ready dict.  Exit codes: 0 all checks pass (a divergent series is a
correct answer, not a failure), 1 validation failure, 2 oracle
disagreement beyond tolerance.
"""

from dataclasses import dataclass, field

import numpy as np

from . import config
from .errors import InvalidBlock, OrderError, ValidationError
from .extension import simultaneous_eigenbasis, validate_block
from .hilbert import order_issues
from .io import finalize
from .oracle import (
    GridFunction,
    boundary_cancellation,
    characteristic_eigenvalues,
    characteristic_residual,
    eigenfunction_gram,
    fd_eigenvalues,
    hausdorff_distance,
    pair_nearest,
    quadrature_norm_identity,
    resolved_window,
)
from .schatten import discrete_spectrum_check, schatten_membership
from .spectrum import block_eigenvalues, operator_spectrum, verify_normal_spectrum_structure

EXIT_OK, EXIT_INVALID, EXIT_ORACLE, EXIT_USAGE = 0, 1, 2, 3

FD_COUNT_PER_MODE = 3
GRAM_K = 2


@dataclass
class Options:
    k_max: int = config.K_MAX
    p: float = 2.0
    grid: int = config.GRID
    oracle: str = "both"
    scheme: str = config.FD_SCHEME
    probe: complex = 0.0
    tol: dict = field(default_factory=lambda: config.tolerances())


def resolve_tolerances(raw, overrides=None):
    merged = dict(raw.tolerances)
    merged.update(overrides or {})
    return config.tolerances(merged)


def _instance(raw, opts):
    return finalize(raw, validate=True, tol=opts.tol["validate"])


def cmd_validate(raw, opts):
    reports = [validate_block(b, opts.tol["validate"]) for b in raw.blocks]
    order = order_issues([b.interval for b in raw.blocks])
    valid = all(r.valid for r in reports) and not order
    results = {
        "blocks": [dict(block=n, **r.to_dict()) for n, r in enumerate(reports, start=1)],
        "order_issues": order,
        "valid": valid,
    }
    return results, EXIT_OK if valid else EXIT_INVALID


def _invalid_results(exc):
    out = {"error": type(exc).__name__, "issues": list(getattr(exc, "issues", [str(exc)]))}
    if isinstance(exc, ValidationError):
        out["reports"] = [r.to_dict() for r in exc.reports]
    if isinstance(exc, InvalidBlock) and exc.report is not None:
        out["reports"] = [dict(block=exc.block_index, **exc.report.to_dict())]
    return out


def _guarded(fn):
    def run(raw, opts):
        try:
            return fn(raw, opts)
        except (ValidationError, OrderError, InvalidBlock) as exc:
            return _invalid_results(exc), EXIT_INVALID

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


@_guarded
def cmd_spectrum(raw, opts):
    inst = _instance(raw, opts)
    sl = operator_spectrum(inst, opts.k_max, opts.tol["validate"], opts.tol["residual"], opts.tol["cluster"])
    return {
        "k_max": sl.k_max,
        "m_max": sl.m_max,
        "complete_modes": sl.complete_modes,
        "records": [r.to_dict() for r in sl.records],
    }, EXIT_OK


@_guarded
def cmd_schatten(raw, opts):
    inst = _instance(raw, opts)
    verdict = schatten_membership(inst, opts.p, opts.k_max, inst.growth_model, opts.tol["validate"])
    return verdict.to_dict(), EXIT_OK


def _check(name, block, value, tolerance, passed=None):
    if passed is None:
        passed = value <= tolerance
    return {"check": name, "block": block, "value": float(value), "tolerance": float(tolerance), "passed": bool(passed)}


def _verify_block(n, block, opts):
    tol = opts.tol
    checks = []
    modes = simultaneous_eigenbasis(block, tol["residual"], tol["cluster"])
    records = block_eigenvalues(block, modes, opts.k_max, n)
    formula = np.array([r.value for r in records])

    if opts.oracle in ("char", "both"):
        char = characteristic_eigenvalues(block, opts.k_max)
        checks.append(_check("set_distance", n, hausdorff_distance(formula, char), tol["set_distance"]))
        res = max(characteristic_residual(block, lam) for lam in formula)
        checks.append(_check("char_residual", n, res, tol["char_residual"]))

    if opts.oracle in ("fd", "both"):
        count = min(FD_COUNT_PER_MODE * block.dim, block.dim * opts.grid)
        fd = fd_eigenvalues(block, opts.grid, count, opts.scheme)
        fd = fd[np.abs(fd.imag) <= resolved_window(block, opts.grid)]
        k_ref = max(opts.k_max, int(np.ceil(max(np.abs(fd.imag).max(initial=0.0) * block.length / np.pi, 1))) + 1)
        exact = [r.value for r in block_eigenvalues(block, modes, k_ref, n)]
        err = float(pair_nearest(fd, exact).max(initial=0.0))
        checks.append(_check("fd_error", n, err, tol["fd"]))

    gram_recs = [r for r in records if abs(r.fourier_index) <= GRAM_K]
    G = eigenfunction_gram(block, gram_recs, config.GRAM_NODES)
    off = float(np.abs(G - np.diag(np.diag(G))).max(initial=0.0))
    checks.append(_check("gram_offdiag", n, off, tol["gram"]))

    scale = max(1.0, float(np.linalg.norm(block.A, 2)))
    worst = 0.0
    for u0 in np.eye(block.dim, dtype=complex).T.tolist() + [np.ones(block.dim) / np.sqrt(block.dim)]:
        worst = max(worst, boundary_cancellation(block, u0) / (scale * np.linalg.norm(u0) ** 2))
    checks.append(_check("boundary_cancellation", n, worst, tol["boundary"]))

    v = modes[0].vector
    ell, a = block.length, block.interval.a
    u = GridFunction.sample(
        block.interval,
        config.GRAM_NODES,
        lambda t: np.sin(np.pi * (t - a) / ell)[:, None] * v[None, :],
        lambda t: (np.pi / ell) * np.cos(np.pi * (t - a) / ell)[:, None] * v[None, :],
        block_index=n,
    )
    lhs, rhs = quadrature_norm_identity(block, u)
    checks.append(_check("norm_identity", n, abs(lhs - rhs), tol["quadrature"] * max(1.0, rhs)))
    return checks


@_guarded
def cmd_verify(raw, opts):
    inst = _instance(raw, opts)
    checks = []
    for n, block in enumerate(inst.blocks, start=1):
        checks.extend(_verify_block(n, block, opts))
    sl = operator_spectrum(inst, opts.k_max, opts.tol["validate"], opts.tol["residual"], opts.tol["cluster"])
    structure = verify_normal_spectrum_structure(sl)
    checks.append(_check("spectrum_structure", 0, len(structure.failures), 0, structure.passed))
    set_d = [c["value"] for c in checks if c["check"] == "set_distance"]
    passed = all(c["passed"] for c in checks)
    results = {
        "oracle": opts.oracle,
        "max_set_distance": max(set_d) if set_d else None,
        "checks": checks,
        "structure_failures": structure.failures,
        "passed": passed,
    }
    return results, EXIT_OK if passed else EXIT_ORACLE


@_guarded
def cmd_discrete(raw, opts):
    inst = _instance(raw, opts)
    out = discrete_spectrum_check(inst, inst.growth_model, opts.probe, tol=opts.tol["validate"])
    return out.to_dict(), EXIT_OK


def cmd_report(raw, opts):
    validation, code = cmd_validate(raw, opts)
    results = {"validate": validation}
    if code != EXIT_OK:
        return results, code
    sections = (
        ("spectrum", cmd_spectrum),
        ("schatten", cmd_schatten),
        ("discrete_spectrum", cmd_discrete),
        ("verify", cmd_verify),
    )
    worst = EXIT_OK
    for name, fn in sections:
        results[name], c = fn(raw, opts)
        if c == EXIT_INVALID:
            return results, c
        worst = max(worst, c)
    return results, worst


COMMANDS = {
    "validate": cmd_validate,
    "spectrum": cmd_spectrum,
    "schatten": cmd_schatten,
    "verify": cmd_verify,
    "report": cmd_report,
}
