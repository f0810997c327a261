"""Command-line driver.

    mpnormal validate INSTANCE
    mpnormal spectrum INSTANCE --k-max 16 --format csv
    mpnormal schatten INSTANCE --p 2
    mpnormal verify   INSTANCE --oracle both --grid 2000
    mpnormal report   INSTANCE --out outdir/

Exit codes: 0 success, 1 validation failure, 2 oracle disagreement,
3 usage error (bad flags, unreadable or malformed instance file).
"""

import argparse
import sys
import time
from pathlib import Path

from . import config
from .commands import COMMANDS, EXIT_USAGE, Options, resolve_tolerances
from .errors import ParseError
from .io import finalize, instance_digest, load_raw
from .report import CSV_COLUMNS, build_report, to_csv, to_json


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _tol_pair(text):
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {name!r} needs a number") from None


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("instance", help="instance file (JSON)")
    common.add_argument("--k-max", type=int, default=config.K_MAX, help="Fourier truncation |k| <= K")
    common.add_argument("--p", type=float, default=2.0, help="Schatten exponent")
    common.add_argument("--grid", type=int, default=config.GRID, help="finite-difference nodes N")
    common.add_argument("--oracle", choices=("char", "fd", "both"), default="both")
    common.add_argument("--scheme", choices=("trapezoid", "forward"), default=config.FD_SCHEME)
    common.add_argument("--probe", type=complex, default=0j, help="resolvent probe (Re < 1)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="NAME=VALUE")
    common.add_argument("--out", help="output file (directory for report --format csv)")
    common.add_argument("--no-timing", action="store_true", help="omit wall time from the report")

    parser = _Parser(prog="mpnormal", description="Spectra and Schatten classes of multipoint normal operators.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _flags(args):
    return {
        "k_max": args.k_max,
        "p": args.p,
        "grid": args.grid,
        "oracle": args.oracle,
        "scheme": args.scheme,
        "probe": args.probe,
        "format": args.format,
        "tol": {k: v for k, v in args.tol},
    }


def _digest(raw):
    try:
        return instance_digest(finalize(raw, validate=False))
    except Exception:
        return None


def _emit(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def run(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.k_max < 0 or args.grid < 16 or args.p < 1:
            raise UsageError("need --k-max >= 0, --grid >= 16 and --p >= 1")
        if args.probe.real >= 1:
            raise UsageError("--probe must lie in the half-plane Re < 1, outside every spectrum")
        if args.command == "report" and args.format == "csv" and not args.out:
            raise UsageError("report --format csv writes a directory; pass --out")
        raw = load_raw(args.instance)
        opts = Options(
            k_max=args.k_max,
            p=args.p,
            grid=args.grid,
            oracle=args.oracle,
            scheme=args.scheme,
            probe=args.probe,
            tol=resolve_tolerances(raw, dict(args.tol)),
        )
    except (UsageError, ParseError, KeyError, ValueError) as exc:
        sys.stderr.write(f"mpnormal: error: {exc}\n")
        return EXIT_USAGE

    start = time.perf_counter()
    results, code = COMMANDS[args.command](raw, opts)
    wall = None if args.no_timing else time.perf_counter() - start
    report = build_report(args.command, _flags(args), _digest(raw), results, wall)

    if args.format == "json":
        _emit(to_json(report), args.out)
    elif args.command == "report":
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "report.json").write_text(to_json(report), encoding="utf-8")
        for name in CSV_COLUMNS:
            if name in report["results"] and "error" not in report["results"][name]:
                (outdir / f"{name}.csv").write_text(to_csv(name, report["results"][name]), encoding="utf-8")
    elif "error" in report["results"]:
        sys.stderr.write(to_json(report))
    else:
        _emit(to_csv(args.command, report["results"]), args.out)
    return code


def main():
    raise SystemExit(run())


if __name__ == "__main__":
    main()
