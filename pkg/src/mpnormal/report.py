"""Report envelope and JSON/CSV serialization.

Result payloads are deterministic for fixed input and flags; only
``wall_time_s`` varies between runs (``--no-timing`` drops it).  Floats
are written at full precision: ``repr`` in JSON and ``%.17g`` in CSV,
so both forms parse back to the same doubles.  Non-finite reals are
written as the strings ``"inf"``, ``"-inf"`` and ``"nan"``.
"""

import csv
import io
import json
import math

from . import __version__

CSV_COLUMNS = {
    "validate": [
        "block",
        "hermitian_defect",
        "positivity_margin",
        "unitarity_defect",
        "commutation_defect",
        "interval_ok",
        "verdict",
    ],
    "spectrum": ["block", "m", "k", "re", "im", "delta"],
    "schatten": ["q", "mu"],
    "verify": ["check", "block", "value", "tolerance", "passed"],
}


def _clean(obj):
    if isinstance(obj, float):
        if math.isfinite(obj):
            return obj
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return _clean(obj.item())
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    return obj


def build_report(command, flags, digest, results, wall_time=None):
    rep = {
        "command": {"name": command, "flags": _clean(flags)},
        "instance_digest": digest,
        "results": _clean(results),
        "tool_version": __version__,
    }
    if wall_time is not None:
        rep["wall_time_s"] = wall_time
    return rep


def to_json(report):
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def csv_rows(command, results):
    """Rows for the flat CSV view of one command's results."""
    if command == "validate":
        return [[r[c] for c in CSV_COLUMNS["validate"]] for r in results["blocks"]]
    if command == "spectrum":
        return [[r[c] for c in CSV_COLUMNS["spectrum"]] for r in results["records"]]
    if command == "schatten":
        return [[q, mu] for q, mu in enumerate(results["series"]["mu"], start=1)]
    if command == "verify":
        return [[r[c] for c in CSV_COLUMNS["verify"]] for r in results["checks"]]
    raise ValueError(f"no CSV view for {command!r}")


def to_csv(command, results):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS[command])
    for row in csv_rows(command, results):
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()
