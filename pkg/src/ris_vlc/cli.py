"""Command-line entry point.

Subcommands ``eval``, ``sweep``, ``design`` and ``bench`` execute one
scenario file (whose mode must match the subcommand); ``figures`` runs
every bundled figure scenario.  Exit codes: 0 ok, 2 validation,
3 numerical, 4 I/O.  Failures emit a machine-parsable JSON error record
on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .diffraction import NullBeyondHorizon
from .optics import EvanescentOrder, TotalInternalReflection
from .quadrature import QuadratureError
from .runner import run, run_bundled
from .scenario import ScenarioError, load_scenario
from .tuning import Infeasible, NonMonotonic, OutOfMaterialRange

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

_NUMERICAL_ERRORS = (EvanescentOrder, TotalInternalReflection,
                     NullBeyondHorizon, QuadratureError, Infeasible,
                     NonMonotonic, OutOfMaterialRange)

_SCENARIO_COMMANDS = ("eval", "sweep", "design", "bench")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ris-vlc",
        description="Beam-steering simulation and inverse design for "
                    "tunable refractive receiver front-ends.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", default=None,
                       help="output directory (default: RIS_VLC_OUT or ./out)")
        p.add_argument("--format", default="csv", choices=["csv"],
                       help="artifact format")
        p.add_argument("--quiet", action="store_true",
                       help="suppress per-artifact summary lines")

    for name in _SCENARIO_COMMANDS:
        p = sub.add_parser(name, help=f"run a {name} scenario file")
        p.add_argument("--scenario", required=True, help="scenario JSON path")
        add_common(p)

    p = sub.add_parser("figures", help="run all bundled figure scenarios")
    add_common(p)
    return parser


def _error_record(exc: BaseException) -> str:
    record = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ScenarioError):
        record["violations"] = exc.errors
    return json.dumps(record)


def _out_dir(args: argparse.Namespace) -> str:
    return args.out or os.environ.get("RIS_VLC_OUT") or "out"


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "figures":
            run_bundled(_out_dir(args), quiet=args.quiet)
            return EXIT_OK
        scenario = load_scenario(args.scenario)
        if scenario.mode != args.command:
            raise ScenarioError(
                [f"scenario mode '{scenario.mode}' does not match "
                 f"subcommand '{args.command}'"])
        run(scenario, _out_dir(args), quiet=args.quiet)
        return EXIT_OK
    except ScenarioError as exc:
        print(_error_record(exc), file=sys.stderr)
        return EXIT_VALIDATION
    except _NUMERICAL_ERRORS as exc:
        print(_error_record(exc), file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(_error_record(exc), file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
