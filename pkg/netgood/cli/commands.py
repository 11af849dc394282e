"""
Command handlers. Each returns (report, exit code); main.py prints the report
"""
import argparse
import logging
import sys
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel

from netgood.cli.documents import (
    export_graph,
    load_document,
    parse_coalitions,
    parse_vector,
)
from netgood.core.exceptions import SingularSystem, ValidationError
from netgood.models.game import OutcomeKind
from netgood.models.schemas import (
    CentralityOut,
    ClassificationOut,
    DynamicsOut,
    IdentityOut,
    MeasureOut,
    PerturbationOut,
    SolveOut,
)
from netgood.services import centrality, equilibrium, game_model
from netgood.services.matrix_analysis import classify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NOT_FOUND = 4

CommandResult = Tuple[Optional[BaseModel], int]


def _weights(args, document, n: int) -> Optional[np.ndarray]:
    if getattr(args, "lam", None):
        return parse_vector(args.lam, n, "--lambda")
    weights = document.welfare_weights()
    return None if weights is None else weights.values


def _partition(args, document, n: int):
    if getattr(args, "coalitions", None):
        return parse_coalitions(args.coalitions, n)
    partition = document.partition()
    if partition is None:
        raise ValidationError("coalition solve needs --coalitions or a 'coalitions' field")
    return partition.validate(n)


def cmd_classify(args: argparse.Namespace) -> CommandResult:
    document = load_document(args.input)
    report = classify(document.dependence(), tol=args.tol)
    return ClassificationOut.from_report(report), EXIT_OK


def cmd_solve(args: argparse.Namespace) -> CommandResult:
    document = load_document(args.input)
    game = document.to_game()
    kind = OutcomeKind(args.kind)

    if kind is OutcomeKind.NASH:
        mode = equilibrium.SolveMode.ALL if args.all else equilibrium.SolveMode.ONE
        report = equilibrium.solve_nash(game, mode, tol=args.tol)
    elif kind is OutcomeKind.PARETO:
        report = equilibrium.solve_pareto(game, _weights(args, document, game.n), tol=args.tol)
    else:
        report = equilibrium.solve_semicoop(game, _partition(args, document, game.n),
                                            _weights(args, document, game.n), tol=args.tol)

    code = EXIT_OK if report.found else EXIT_NOT_FOUND
    return SolveOut.from_report(report), code


def _exogenous(args, game) -> np.ndarray:
    if args.exo == "qbar":
        return game_model.standalone_target(game)
    if args.exo == "ones":
        return np.ones(game.n)
    if args.exo == "costs":
        return np.array(game.costs)
    return parse_vector(args.exo, game.n, "--exo")


def cmd_centrality(args: argparse.Namespace) -> CommandResult:
    document = load_document(args.input)
    game = document.to_game()
    g = game.g
    e = _exogenous(args, game)
    wanted = ["alpha", "katz", "bonacich"] if args.measure == "all" else [args.measure]

    measures = []
    for name in wanted:
        if name == "alpha":
            result = centrality.alpha_centrality(g, args.alpha, e)
        elif name == "katz":
            result = centrality.katz_centrality(g, args.alpha, e, args.depth)
        else:
            result = centrality.bonacich_centrality(g, args.alpha, args.beta)
        measures.append(MeasureOut.from_result(result))

    identity = None
    if args.measure == "all":
        holds = centrality.verify_measure_identity(g, args.alpha)
        try:
            residuals = centrality.measure_identity_residuals(g, args.alpha)
        except SingularSystem:
            residuals = {}
        identity = IdentityOut(holds=holds, residuals=residuals)

    out = CentralityOut(alpha=args.alpha, exogenous=e.tolist(), measures=measures,
                        identity=identity)
    return out, EXIT_OK


def cmd_whatif(args: argparse.Namespace) -> CommandResult:
    document = load_document(args.input)
    game = document.to_game()
    kind = OutcomeKind(args.kind)
    lam = _weights(args, document, game.n) if kind is not OutcomeKind.NASH else None
    partition = _partition(args, document, game.n) if kind is OutcomeKind.SEMICOOP else None
    result = equilibrium.perturb_edges(game, [tuple(e) for e in args.edge], args.weight,
                                       kind, lam, partition, tol=args.tol)
    return PerturbationOut.from_result(result), EXIT_OK


def cmd_dynamics(args: argparse.Namespace) -> CommandResult:
    document = load_document(args.input)
    game = document.to_game()
    x0 = None if args.x0 is None else parse_vector(args.x0, game.n, "--x0")
    result = equilibrium.best_response_dynamics(game, x0, max_iter=args.max_iter, tol=args.tol)
    return DynamicsOut.from_result(result, trace=args.trace), EXIT_OK


def cmd_export(args: argparse.Namespace) -> CommandResult:
    document = load_document(args.input)
    dependence = document.dependence()
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as handle:
            export_graph(dependence, args.format, handle)
        logger.info("wrote %s export to %s", args.format, args.output)
    else:
        export_graph(dependence, args.format, sys.stdout)
    return None, EXIT_OK
