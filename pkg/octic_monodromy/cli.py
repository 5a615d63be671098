"""
Command line entry point.

    ocm run [--stages snap,cones,fan] [--steps N] [--output report.json]
    ocm monodromy --loop l1 --steps 100000
    ocm fan-check --case "12x13"
    ocm compare --golden golden.json [--report report.json]
"""

import argparse
import json
import logging
import sys
from typing import List, Optional, Sequence

from .config import ENV_LOG_LEVEL, RunConfig, environment_overrides, load_config
from .errors import ConfigError, ConvergenceFailure, InconclusiveCase, OcticError, SnapFailure
from .fanchecker import CASES, INCONCLUSIVE, check_case, get_case
from .pipeline import run
from .report import Report, archive_hdf5, compare_golden, load_report, write_report
from .version import __version__

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

FAILURE_EXIT_CODES = {
    SnapFailure.__name__: SnapFailure.exit_code,
    InconclusiveCase.__name__: InconclusiveCase.exit_code,
    ConvergenceFailure.__name__: ConvergenceFailure.exit_code,
}


def _csv(value: str) -> List[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ocm",
        description="Monodromy, nilpotent cones and fan verification for the mirror octic family.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="TOML run configuration")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR (default INFO)")
    parser.add_argument("--output", help="write the JSON report here instead of stdout")
    parser.add_argument("--archive", help="also archive every report matrix to this HDF5 file")
    parser.add_argument("--precision", type=int, help="working precision in bits")
    parser.add_argument("--threads", type=int, help="loops transported in parallel")
    parser.add_argument("--seed", type=int, help="random seed for the orbit search")
    parser.add_argument("--c11", type=int, help="C11 normalization of the MUM monodromies")
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="run pipeline stages and write a report")
    run_parser.add_argument("--stages", type=_csv,
                            help="comma list of amodel, transport, snap, cones, fan or all")
    run_parser.add_argument("--steps", type=int, help="transport steps per segment")
    run_parser.add_argument("--loops", type=_csv, help="comma list of loop labels")
    run_parser.add_argument("--method", choices=("euler", "rk4"))
    run_parser.add_argument("--max-error", type=float, help="largest accepted error bound")
    run_parser.add_argument("--search-trials", type=int, help="orbit search trials per pairing")
    run_parser.add_argument("--search-level", type=int, help="congruence level of the search")
    run_parser.add_argument("--search-word-length", type=int)

    mono = sub.add_parser("monodromy", help="transport selected loops only")
    mono.add_argument("--loop", action="append", required=True, dest="loops")
    mono.add_argument("--steps", type=int)
    mono.add_argument("--method", choices=("euler", "rk4"))
    mono.add_argument("--max-error", type=float)

    fan = sub.add_parser("fan-check", help="check cone pairings for interior intersections")
    fan.add_argument("--case", action="append", dest="cases",
                     help=f"case id, repeatable; one of {[c.case_id for c in CASES]}")

    compare = sub.add_parser("compare", help="compare a report with a golden report")
    compare.add_argument("--golden", required=True)
    compare.add_argument("--report", help="existing report; runs the configured stages if omitted")
    compare.add_argument("--tolerance", type=float, default=1e-6)
    return parser


def configure_logging(level: Optional[str]):
    level = (level or environment_overrides().get("log_level") or "INFO").upper()
    numeric = getattr(logging, level, None)
    if not isinstance(numeric, int):
        raise ConfigError(f"Unknown log level {level!r} (from --log-level or {ENV_LOG_LEVEL})")
    logging.basicConfig(level=numeric, format=LOG_FORMAT, force=True)


def _overrides(args: argparse.Namespace) -> dict:
    keys = ("output", "archive", "precision", "threads", "seed", "c11", "stages", "steps",
            "loops", "method", "max_error", "search_trials", "search_level",
            "search_word_length")
    return {key: getattr(args, key) for key in keys if getattr(args, key, None) is not None}


def exit_code_for(report: Report) -> int:
    """Exit code of the first recorded failure, 0 for a clean report."""
    if not report.failures:
        return 0
    return FAILURE_EXIT_CODES.get(report.failures[0].get("error"), 1)


def _emit(report: Report, config: RunConfig):
    if config.output:
        path, action = write_report(report, config.output)
        print(f"Report {action}: {path}")
    else:
        sys.stdout.write(report.to_json())
    if config.archive:
        archive_hdf5(report, config.archive)


def _run(args, overrides: dict) -> int:
    config = load_config(args.config, overrides)
    report = run(config)
    _emit(report, config)
    return exit_code_for(report)


def _fan_check(args) -> int:
    cases = [get_case(case_id) for case_id in args.cases] if args.cases else list(CASES)
    code = 0
    verdicts = {}
    for case in cases:
        try:
            verdict = check_case(case)
        except InconclusiveCase as e:
            logger.error(f"Fan case {case.case_id} is inconclusive: {e}")
            code = InconclusiveCase.exit_code
            continue
        verdicts[case.case_id] = verdict.to_dict()
        if verdict.result == INCONCLUSIVE:
            code = InconclusiveCase.exit_code
        print(f"{case.case_id:10s} level {case.level}  {verdict.result}  "
              f"({len(verdict.evidence)} checked steps)")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            json.dump(verdicts, handle, indent=2, sort_keys=True)
            handle.write("\n")
    return code


def _compare(args, overrides: dict) -> int:
    if args.report:
        report = load_report(args.report)
    else:
        report = run(load_config(args.config, overrides))
    diff = compare_golden(report, args.golden, tolerance=args.tolerance)
    print(json.dumps(diff.to_dict(), indent=2, sort_keys=True))
    if not diff.clean:
        logger.warning(f"Report differs from golden in stage(s): {', '.join(diff.stages()) or '-'}")
        return 1
    return 0


def execute(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configure_logging(args.log_level)
        overrides = _overrides(args)
        if args.command == "run":
            return _run(args, overrides)
        if args.command == "monodromy":
            overrides["stages"] = ("transport",)
            return _run(args, overrides)
        if args.command == "fan-check":
            return _fan_check(args)
        return _compare(args, overrides)
    except OcticError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except KeyError as e:
        logger.error(str(e))
        return 1


def main():
    sys.exit(execute())
