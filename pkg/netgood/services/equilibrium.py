"""
Equilibrium Service
Nash, Pareto and semi-cooperative solvers, interiority checks, best-response
dynamics, a brute-force deviation oracle and edge perturbation experiments
"""
import enum
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from netgood.config import get_settings
from netgood.core.exceptions import (
    DimensionTooLarge,
    DomainError,
    NetGoodException,
    NoEquilibrium,
    PerturbationFailed,
    ValidationError,
)
from netgood.models.game import (
    CoalitionPartition,
    EffortProfile,
    GameSpec,
    OutcomeKind,
    WelfareWeights,
)
from netgood.services import game_model
from netgood.services.lcp import (
    LCPSolution,
    RayTermination,
    SolverDiagnostics,
    enumerate_solutions,
    lemke_solve,
    verify_solution,
)
from netgood.services.matrix_analysis import ClassificationReport, classify
from netgood.services.simplex import find_feasible_point

logger = logging.getLogger(__name__)


class SolveMode(str, enum.Enum):
    ONE = "one"
    ALL = "all"


class DynamicsVerdict(str, enum.Enum):
    CONVERGED = "converged"
    DIVERGED = "diverged"
    OSCILLATING = "oscillating"


@dataclass
class SolveReport:
    """Profiles of one outcome kind, with verdicts and solver trace"""
    outcome: OutcomeKind
    profiles: List[EffortProfile] = field(default_factory=list)
    verdicts: Optional[ClassificationReport] = None
    interiority: List[bool] = field(default_factory=list)
    diagnostics: SolverDiagnostics = field(default_factory=SolverDiagnostics)
    targets: Optional[np.ndarray] = None
    perceived_costs: Optional[np.ndarray] = None
    degenerate: List[Tuple[int, ...]] = field(default_factory=list)
    ray: Optional[RayTermination] = None
    reason: Optional[str] = None

    @property
    def found(self) -> bool:
        return bool(self.profiles)


@dataclass(frozen=True, eq=False)
class PerturbationResult:
    edges: Tuple[Tuple[int, int], ...]
    old_weights: Tuple[float, ...]
    new_weight: float
    baseline: EffortProfile
    perturbed: EffortProfile
    delta: np.ndarray
    sign_summary: Tuple[str, ...]

    @property
    def edge(self) -> Tuple[int, int]:
        return self.edges[0]

    @property
    def old_weight(self) -> float:
        return self.old_weights[0]


@dataclass(frozen=True, eq=False)
class DynamicsResult:
    verdict: DynamicsVerdict
    trajectory: List[np.ndarray]
    iterations: int
    x: np.ndarray
    verified: bool = False


def _nash_profile(sol: LCPSolution) -> EffortProfile:
    return EffortProfile(sol.x, OutcomeKind.NASH, w=sol.w)


def solve_nash(game: GameSpec, mode: SolveMode = SolveMode.ONE,
               tol: Optional[float] = None, cap: Optional[int] = None) -> SolveReport:
    """
    Nash profiles of LCP(I + G, -q_bar). ONE runs Lemke's method, ALL
    enumerates every support under the dimension cap.
    """
    tol = get_settings().TOL if tol is None else tol
    mode = SolveMode(mode)
    inst = game_model.nash_lcp(game)
    report = SolveReport(OutcomeKind.NASH, targets=-inst.q)
    diag = report.diagnostics

    try:
        report.verdicts = classify(game.dependence, tol=tol, cap=cap)
    except DimensionTooLarge as exc:
        if mode is SolveMode.ALL:
            raise
        diag.notes.append(f"classification skipped: {exc}")

    if mode is SolveMode.ONE:
        result = lemke_solve(inst, tol=tol, diagnostics=diag)
        if isinstance(result, RayTermination):
            report.ray = result
            report.reason = "Lemke's path ended on a ray; no equilibrium found along it"
            solutions = []
        else:
            solutions = [result]
    else:
        solutions = enumerate_solutions(inst, tol=tol, cap=cap, diagnostics=diag)
        if not solutions:
            report.reason = "no Nash equilibrium exists"

    for k, sol in enumerate(solutions):
        if not verify_solution(inst, sol, tol):
            logger.warning("dropping Nash candidate %s that fails verification", sol.x.tolist())
            continue
        diag.residuals[f"lcp_{k}"] = float(np.max(np.abs(sol.w - (inst.m @ sol.x + inst.q))))
        report.profiles.append(_nash_profile(sol))
        report.interiority.append(bool(np.all(sol.w == 0)))
        report.degenerate.append(sol.degenerate)

    logger.info("solve_nash(%s) on n=%d found %d profiles", mode.value, game.n,
                len(report.profiles))
    return report


def interior_exists(game: GameSpec, target, tol: Optional[float] = None) -> bool:
    """True iff target lies in the positive cone of the columns of I + G"""
    settings = get_settings()
    tol = settings.TOL if tol is None else tol
    target = np.asarray(target, dtype=float).reshape(-1)
    if target.shape != (game.n,):
        raise ValidationError(f"target must have length {game.n}")
    m = np.eye(game.n) + game.g
    if 1.0 / np.linalg.cond(m, 1) >= settings.SINGULAR_RCOND:
        return bool(np.all(np.linalg.solve(m, target) >= -tol))
    return find_feasible_point(m, target, tol=tol) is not None


def _cooperative_report(game: GameSpec, outcome: OutcomeKind, weights: WelfareWeights,
                        partition: CoalitionPartition, tol: float) -> SolveReport:
    """Shared interior solve for Pareto (grand coalition) and semi-cooperative outcomes"""
    g_c = game_model.coalition_modified_matrix(game.dependence, partition)
    perceived = game_model.perceived_costs(game, weights, g_c.g)
    if outcome is OutcomeKind.PARETO:
        target = game_model.pareto_target(game, weights)
    else:
        target = game_model.semicoop_target(game, partition, weights)
    report = SolveReport(outcome, targets=target, perceived_costs=perceived)

    x = game_model.interior_profile(game, target)
    if np.any(x < -tol):
        report.reason = (f"no interior {outcome.value} profile: "
                         f"(I + G)^-1 target has negative entries {x.tolist()}")
        report.diagnostics.notes.append(report.reason)
        return report

    x = np.where(x < 0, 0.0, x)
    residual = game_model.coalition_foc_residual(game, partition, weights, x)
    worst = float(np.max(np.abs(residual)))
    report.diagnostics.residuals["foc"] = worst
    if worst > get_settings().FOC_TOL:
        report.reason = f"first-order residual {worst:.3g} above tolerance"
        report.diagnostics.notes.append(report.reason)
        return report

    profile_partition = partition if outcome is OutcomeKind.SEMICOOP else None
    report.profiles.append(EffortProfile(x, outcome, weights=weights,
                                         partition=profile_partition,
                                         w=np.zeros(game.n)))
    report.interiority.append(interior_exists(game, target, tol))
    report.degenerate.append(tuple(int(i) for i in np.nonzero(x == 0)[0]))
    return report


def _as_weights(game: GameSpec, lam) -> WelfareWeights:
    if lam is None:
        return WelfareWeights.ones(game.n)
    if not isinstance(lam, WelfareWeights):
        lam = WelfareWeights(np.asarray(lam, dtype=float))
    return lam.check(game.n)


def solve_pareto(game: GameSpec, lam=None, tol: Optional[float] = None) -> SolveReport:
    """
    Interior Pareto profile x = (I + G)^-1 q^lambda. Only profiles with zero
    slack are certified; otherwise the report is empty and carries a reason.
    """
    tol = get_settings().TOL if tol is None else tol
    weights = _as_weights(game, lam)
    return _cooperative_report(game, OutcomeKind.PARETO, weights,
                               CoalitionPartition.grand(game.n), tol)


def solve_semicoop(game: GameSpec, partition: CoalitionPartition, lam=None,
                   tol: Optional[float] = None) -> SolveReport:
    """Interior semi-cooperative profile (I + G)^-1 q^{C,lambda}; uniqueness is not claimed"""
    tol = get_settings().TOL if tol is None else tol
    partition.validate(game.n)
    weights = _as_weights(game, lam)
    report = _cooperative_report(game, OutcomeKind.SEMICOOP, weights, partition, tol)
    report.diagnostics.notes.append("semi-cooperative profile reported without a uniqueness claim")
    return report


def best_response_dynamics(game: GameSpec, x0=None, max_iter: Optional[int] = None,
                           tol: Optional[float] = None) -> DynamicsResult:
    """
    Synchronous best replies x <- max(0, q_bar - G x). `iterations` counts the
    updates made before the fixed point was detected.
    """
    settings = get_settings()
    tol = settings.TOL if tol is None else tol
    max_iter = settings.BR_MAX_ITER if max_iter is None else max_iter
    qbar = game_model.standalone_target(game)
    x = np.zeros(game.n) if x0 is None else np.array(x0, dtype=float).reshape(-1)
    if x.shape != (game.n,):
        raise ValidationError(f"x0 must have length {game.n}")
    if np.any(x < 0):
        raise ValidationError("x0 must be nonnegative")

    top = float(np.max(qbar))
    bound = settings.BR_DIVERGENCE_FACTOR * (top if top > 0 else 1.0)
    trajectory = [x.copy()]

    for k in range(1, max_iter + 1):
        new = np.maximum(0.0, qbar - game.g @ x)
        trajectory.append(new)
        step = float(np.max(np.abs(new - x)))
        if step < tol:
            inst = game_model.nash_lcp(game)
            verified = verify_solution(inst, LCPSolution.from_x(inst, new, tol), tol)
            logger.debug("best replies converged after %d updates", k - 1)
            return DynamicsResult(DynamicsVerdict.CONVERGED, trajectory, k - 1, new, verified)
        if float(np.max(np.abs(new))) > bound:
            logger.debug("best replies passed the divergence bound %g at update %d", bound, k)
            return DynamicsResult(DynamicsVerdict.DIVERGED, trajectory, k, new)
        if len(trajectory) >= 3 and float(np.max(np.abs(new - trajectory[-3]))) < tol:
            logger.debug("best replies entered a 2-cycle at update %d", k)
            return DynamicsResult(DynamicsVerdict.OSCILLATING, trajectory, k, new)
        x = new

    logger.warning("best replies undecided after %d updates", max_iter)
    return DynamicsResult(DynamicsVerdict.OSCILLATING, trajectory, max_iter, x)


def grid_oracle_is_nash(game: GameSpec, x, radius: Optional[float] = None,
                        steps: Optional[int] = None, tol: Optional[float] = None) -> bool:
    """
    Check the Nash definition directly: no agent gains more than tol by any
    unilateral deviation on a grid of `steps` points around its own effort.
    Deviations where the benefit family is undefined are skipped.
    """
    settings = get_settings()
    steps = settings.GRID_STEPS if steps is None else steps
    tol = settings.GRID_TOL if tol is None else tol
    x = np.array(x, dtype=float).reshape(-1)
    if x.shape != (game.n,) or np.any(x < 0):
        raise ValidationError("grid oracle needs a nonnegative profile of length n")
    if radius is None:
        radius = max(1.0, 2.0 * float(np.max(game_model.standalone_target(game))))

    for i in range(game.n):
        current = game_model.utility(game, x, i)
        trial = x.copy()
        for value in np.linspace(max(0.0, x[i] - radius), x[i] + radius, steps):
            trial[i] = value
            try:
                deviation = game_model.utility(game, trial, i)
            except DomainError:
                continue
            if deviation > current + tol:
                logger.debug("agent %d gains %.3g by deviating to %g",
                             i, deviation - current, value)
                return False
    return True


def solve_outcome(game: GameSpec, outcome: OutcomeKind, lam=None,
                  partition: Optional[CoalitionPartition] = None,
                  tol: Optional[float] = None) -> SolveReport:
    """Single-profile solve for any outcome kind"""
    outcome = OutcomeKind(outcome)
    if outcome is OutcomeKind.NASH:
        return solve_nash(game, SolveMode.ONE, tol=tol)
    if outcome is OutcomeKind.PARETO:
        return solve_pareto(game, lam, tol=tol)
    if partition is None:
        raise ValidationError("a coalition partition is required for semi-cooperative outcomes")
    return solve_semicoop(game, partition, lam, tol=tol)


def _solve_side(side: str, game: GameSpec, outcome: OutcomeKind, lam, partition,
                tol: float, partial=None) -> EffortProfile:
    try:
        report = solve_outcome(game, outcome, lam, partition, tol)
        if not report.found:
            raise NoEquilibrium(report.reason or f"no {outcome.value} profile found")
    except NetGoodException as exc:
        raise PerturbationFailed(side, exc, partial) from exc
    return report.profiles[0]


def perturb_edges(game: GameSpec, edges: Sequence[Tuple[int, int]], new_weight: float,
                  outcome: OutcomeKind = OutcomeKind.NASH, lam=None,
                  partition: Optional[CoalitionPartition] = None,
                  tol: Optional[float] = None) -> PerturbationResult:
    """Set every listed g_ij to new_weight, re-solve and report per-agent effort changes"""
    tol = get_settings().TOL if tol is None else tol
    edges = tuple((int(i), int(j)) for i, j in edges)
    if not edges:
        raise ValidationError("at least one edge is required")
    for i, j in edges:
        if not (0 <= i < game.n and 0 <= j < game.n):
            raise ValidationError(f"edge ({i}, {j}) out of range for n = {game.n}")

    dependence = game.dependence
    for i, j in edges:
        dependence = dependence.with_weight(i, j, float(new_weight))
    perturbed_game = game.with_dependence(dependence)

    baseline = _solve_side("baseline", game, outcome, lam, partition, tol)
    perturbed = _solve_side("perturbed", perturbed_game, outcome, lam, partition, tol,
                            partial=baseline)

    delta = perturbed.x - baseline.x
    signs = tuple("+" if d > tol else "-" if d < -tol else "0" for d in delta)
    return PerturbationResult(
        edges=edges,
        old_weights=tuple(float(game.g[i, j]) for i, j in edges),
        new_weight=float(new_weight),
        baseline=baseline,
        perturbed=perturbed,
        delta=delta,
        sign_summary=signs,
    )


def perturb_edge(game: GameSpec, i: int, j: int, new_weight: float,
                 outcome: OutcomeKind = OutcomeKind.NASH, lam=None,
                 partition: Optional[CoalitionPartition] = None,
                 tol: Optional[float] = None) -> PerturbationResult:
    return perturb_edges(game, [(i, j)], new_weight, outcome, lam, partition, tol)
