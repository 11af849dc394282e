"""
CLI Entry Point
Sets up logging, parses the command line, dispatches to a command handler and
maps library exceptions to exit codes

Usage examples:
  netgood classify samples/example1_substitutes.json
  netgood solve samples/example1_multiple.json --all
  netgood solve samples/example3_star_g02.json pareto --lambda 1,1,1,1
  netgood centrality samples/example1_substitutes.json --alpha -1 --exo qbar
  netgood whatif samples/example2_before.json --edge 0 2 --weight 0.4
  netgood dynamics samples/example1_complements.json --x0 1,1
  netgood export samples/example3_star_g02.json --format csv --output star.csv
"""
import argparse
import json
import logging
import sys
from logging.handlers import RotatingFileHandler
from typing import List, Optional

from netgood.cli import commands
from netgood.cli.documents import render
from netgood.config import get_settings
from netgood.core.exceptions import (
    CostOutOfRange,
    DimensionTooLarge,
    DocumentError,
    NetGoodException,
    NoEquilibrium,
    PerturbationFailed,
    SingularSystem,
    ValidationError,
)
from netgood.models.game import OutcomeKind
from netgood.models.schemas import ErrorOut

logger = logging.getLogger("netgood")

# Checked in order; subclasses first
EXIT_CODES = [
    (ValidationError, 2),
    (DimensionTooLarge, 3),
    (NoEquilibrium, 4),
    (CostOutOfRange, 5),
    (SingularSystem, 6),
    (NetGoodException, 1),
]


def configure_logging(verbose: bool = False):
    """Console logging to stderr, plus a rotating log file when LOG_FILE is set"""
    settings = get_settings()
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter(settings.LOG_FORMAT))
    handlers: List[logging.Handler] = [console_handler]

    if settings.LOG_FILE:
        log_handler = RotatingFileHandler(
            settings.LOG_FILE,
            maxBytes=10 * 1024 * 1024,  # 10 MB per file
            backupCount=5,
            encoding="utf-8",
        )
        log_handler.setFormatter(logging.Formatter(settings.LOG_FORMAT))
        handlers.append(log_handler)

    level = logging.DEBUG if verbose else getattr(logging, settings.LOG_LEVEL.upper())
    logging.basicConfig(level=level, format=settings.LOG_FORMAT, handlers=handlers)
    logging.getLogger("netgood").setLevel(level)


def exit_code_for(exc: NetGoodException) -> int:
    if isinstance(exc, PerturbationFailed):
        return exit_code_for(exc.cause)
    for cls, code in EXIT_CODES:
        if isinstance(exc, cls):
            return code
    return 1


def error_document(exc: Exception) -> ErrorOut:
    cause = exc.cause if isinstance(exc, PerturbationFailed) else exc
    doc = ErrorOut(error=type(cause).__name__, detail=str(exc))
    if isinstance(exc, PerturbationFailed):
        doc.side = exc.side
    if isinstance(cause, DocumentError):
        doc.field = cause.field
        doc.line = cause.line
    if isinstance(cause, CostOutOfRange):
        doc.agents = cause.agents
        doc.values = cause.values
    return doc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netgood",
        description="Public-good provision games on weighted directed networks")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", help="game document (JSON)")
        p.set_defaults(handler=handler)
        return p

    cls = command("classify", commands.cmd_classify, "matrix classes and existence/uniqueness verdicts")
    cls.add_argument("--tol", type=float, default=None)

    slv = command("solve", commands.cmd_solve, "Nash, Pareto or coalition effort profiles")
    slv.add_argument("kind", nargs="?", default="nash", choices=[k.value for k in OutcomeKind])
    slv.add_argument("--all", action="store_true", help="enumerate every Nash equilibrium")
    slv.add_argument("--lambda", dest="lam", default=None, help="welfare weights, e.g. 1,1,2")
    slv.add_argument("--coalitions", default=None, help='partition, e.g. "0|1,2,3"')
    slv.add_argument("--tol", type=float, default=None)

    cen = command("centrality", commands.cmd_centrality, "alpha, Katz and Bonacich centralities")
    cen.add_argument("--alpha", type=float, default=-1.0)
    cen.add_argument("--exo", default="qbar", help="qbar, ones, costs or a comma list")
    cen.add_argument("--measure", default="alpha", choices=["alpha", "katz", "bonacich", "all"])
    cen.add_argument("--depth", type=int, default=60, help="Katz series depth")
    cen.add_argument("--beta", type=float, default=1.0, help="Bonacich scale")

    wif = command("whatif", commands.cmd_whatif, "re-solve after changing edge weights")
    wif.add_argument("--edge", nargs=2, type=int, action="append", required=True,
                     metavar=("I", "J"), help="arc i -> j; repeat for several arcs")
    wif.add_argument("--weight", type=float, required=True)
    wif.add_argument("--kind", default="nash", choices=[k.value for k in OutcomeKind])
    wif.add_argument("--lambda", dest="lam", default=None)
    wif.add_argument("--coalitions", default=None)
    wif.add_argument("--tol", type=float, default=None)

    dyn = command("dynamics", commands.cmd_dynamics, "synchronous best-response dynamics")
    dyn.add_argument("--x0", default=None, help="starting profile, e.g. 0,0")
    dyn.add_argument("--max-iter", dest="max_iter", type=int, default=None)
    dyn.add_argument("--tol", type=float, default=None)
    dyn.add_argument("--trace", action="store_true", help="include the full trajectory")

    exp = command("export", commands.cmd_export, "write the network as DOT or CSV")
    exp.add_argument("--format", default="dot", choices=["dot", "csv"])
    exp.add_argument("--output", default=None, help="file path (default stdout)")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        configure_logging(args.verbose)
    except ValueError as exc:
        # invalid NETGOOD_* settings
        sys.stderr.write(json.dumps({"error": "ConfigurationError", "detail": str(exc)}) + "\n")
        return 2

    try:
        report, code = args.handler(args)
    except NetGoodException as exc:
        logger.debug("command %s failed", args.command, exc_info=True)
        sys.stderr.write(render(error_document(exc)) + "\n")
        return exit_code_for(exc)

    if report is not None:
        sys.stdout.write(render(report) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
