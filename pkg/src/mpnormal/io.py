"""Instance files: versioned JSON with complex entries as ``[re, im]`` pairs.

Schema (version ``"1"``)::

    {
      "version": "1",
      "blocks": [
        {"interval": [a, b],
         "A": [[[re, im], ...], ...],      # row-major, dim x dim
         "W": [[[re, im], ...], ...]},
        ...
      ],
      "growth_model": {                    # optional
        "lambda1": {"kind": "constant", "value": 1.0},
        "dims":    {"kind": "constant", "value": 1.0},
        "lengths": {"kind": "constant", "value": 1.0}   # optional
      },
      "tolerances": {"validate": 1e-10}    # optional overrides
    }

Sequence kinds are documented in :mod:`mpnormal.growth`.
"""

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import FORMAT_VERSION, TOLERANCES
from .errors import ParseError, ValidationError, OrderError
from .extension import validate_block
from .growth import GrowthModel
from .hilbert import Block, Instance, Interval, order_issues


@dataclass
class RawInstance:
    """Parsed but not yet order-checked or validated instance data."""

    blocks: list
    growth_model: object = None
    tolerances: dict = field(default_factory=dict)
    version: str = FORMAT_VERSION


def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _parse_matrix(obj, where, issues):
    if not isinstance(obj, list) or not obj:
        issues.append(f"{where}: expected a non-empty list of rows")
        return None
    n = len(obj)
    out = np.zeros((n, n), dtype=complex)
    ok = True
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != n:
            issues.append(f"{where}: row {i} must have {n} entries")
            ok = False
            continue
        for j, z in enumerate(row):
            if not (isinstance(z, list) and len(z) == 2 and all(_is_number(c) for c in z)):
                issues.append(f"{where}[{i}][{j}]: expected [re, im], got {z!r}")
                ok = False
                continue
            out[i, j] = complex(z[0], z[1])
    return out if ok else None


def _matrix_to_list(M):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M)]


def instance_from_dict(data, validate=True, tol=None):
    """Build an :class:`Instance`, collecting every violation before raising."""
    raw = raw_from_dict(data)
    return finalize(raw, validate=validate, tol=tol)


def raw_from_dict(data):
    issues = []
    if not isinstance(data, dict):
        raise ParseError("instance file must hold a JSON object")
    version = data.get("version")
    if version != FORMAT_VERSION:
        issues.append(f"version: expected {FORMAT_VERSION!r}, got {version!r}")
    blocks_data = data.get("blocks")
    if not isinstance(blocks_data, list) or not blocks_data:
        issues.append("blocks: expected a non-empty list")
        blocks_data = []
    blocks = []
    for n, bd in enumerate(blocks_data, start=1):
        where = f"blocks[{n}]"
        if not isinstance(bd, dict):
            issues.append(f"{where}: expected an object")
            continue
        iv = bd.get("interval")
        if not (isinstance(iv, list) and len(iv) == 2 and all(_is_number(x) for x in iv)):
            issues.append(f"{where}.interval: expected [a, b]")
            iv = None
        A = _parse_matrix(bd.get("A"), f"{where}.A", issues)
        W = _parse_matrix(bd.get("W"), f"{where}.W", issues)
        if A is not None and W is not None and A.shape != W.shape:
            issues.append(f"{where}: A is {A.shape[0]}x{A.shape[0]} but W is {W.shape[0]}x{W.shape[0]}")
            continue
        if iv is not None and A is not None and W is not None:
            blocks.append(Block(Interval(*iv), A, W))

    growth = None
    if data.get("growth_model") is not None:
        try:
            growth = GrowthModel.from_dict(data["growth_model"])
        except (KeyError, TypeError, ValueError) as exc:
            issues.append(f"growth_model: {exc}")

    tolerances = data.get("tolerances") or {}
    if not isinstance(tolerances, dict):
        issues.append("tolerances: expected an object")
        tolerances = {}
    for name, value in tolerances.items():
        if name not in TOLERANCES:
            issues.append(f"tolerances.{name}: unknown tolerance")
        elif not _is_number(value) or value <= 0:
            issues.append(f"tolerances.{name}: expected a positive number")

    if issues:
        raise ParseError("malformed instance", issues)
    return RawInstance(blocks, growth, dict(tolerances), version)


def finalize(raw, validate=True, tol=None):
    if tol is None:
        tol = raw.tolerances.get("validate", TOLERANCES["validate"])
    order = order_issues([b.interval for b in raw.blocks])
    reports = [validate_block(b, tol) for b in raw.blocks] if validate else []
    bad = [
        f"block {n}: " + "; ".join(r.reasons) for n, r in enumerate(reports, start=1) if not r.valid
    ]
    if bad:
        raise ValidationError("blocks violate the normal-extension hypotheses", bad + order, reports)
    if order:
        raise OrderError("intervals must be disjoint and increasing", order)
    return Instance(tuple(raw.blocks), raw.growth_model, raw.tolerances, raw.version)


def read_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def load_raw(path):
    return raw_from_dict(read_json(path))


def parse_instance(path, validate=True, tol=None):
    return instance_from_dict(read_json(path), validate=validate, tol=tol)


def instance_to_dict(instance):
    d = {
        "version": instance.version,
        "blocks": [
            {
                "interval": [b.interval.a, b.interval.b],
                "A": _matrix_to_list(b.A),
                "W": _matrix_to_list(b.W),
            }
            for b in instance.blocks
        ],
    }
    if instance.growth_model is not None:
        d["growth_model"] = instance.growth_model.to_dict()
    if instance.tolerances:
        d["tolerances"] = dict(instance.tolerances)
    return d


def serialize_instance(instance):
    return json.dumps(instance_to_dict(instance), indent=2, sort_keys=True) + "\n"


def write_instance(instance, path):
    Path(path).write_text(serialize_instance(instance), encoding="utf-8")


def instance_digest(instance):
    canon = json.dumps(instance_to_dict(instance), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()
