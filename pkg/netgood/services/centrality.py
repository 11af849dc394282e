"""
Centrality Service
Alpha, Katz and Bonacich centralities, the identities linking them, and the
centrality characterization of interior effort profiles
"""
import enum
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import scipy.linalg

from netgood.config import get_settings
from netgood.core.exceptions import NotInterior, SingularSystem, ValidationError
from netgood.models.game import EffortProfile, GameSpec, OutcomeKind
from netgood.services import game_model
from netgood.services.matrix_analysis import as_square_matrix, is_symmetric, spectral_radius

logger = logging.getLogger(__name__)


class Measure(str, enum.Enum):
    ALPHA = "alpha"
    KATZ = "katz"
    BONACICH = "bonacich"


@dataclass(frozen=True)
class Convergence:
    """Closed form, or a truncated series with its last-term residual"""
    closed: bool
    depth: Optional[int] = None
    residual: Optional[float] = None


@dataclass(frozen=True, eq=False)
class CentralityResult:
    values: np.ndarray
    measure: Measure
    params: Dict[str, Any] = field(default_factory=dict)
    convergence: Convergence = Convergence(closed=True)


def _resolvent_solve(g: np.ndarray, alpha: float, rhs: np.ndarray) -> np.ndarray:
    """Solve (I - alpha G) v = rhs by LU with partial pivoting"""
    n = g.shape[0]
    a = np.eye(n) - alpha * g
    if 1.0 / np.linalg.cond(a, 1) < get_settings().SINGULAR_RCOND:
        raise SingularSystem(f"I - alpha G is singular at alpha = {alpha}")
    return scipy.linalg.lu_solve(scipy.linalg.lu_factor(a, check_finite=False), rhs)


def _vector(e, n: int, name: str = "e") -> np.ndarray:
    arr = np.asarray(e, dtype=float).reshape(-1)
    if arr.shape != (n,):
        raise ValidationError(f"{name} must have length {n}, got {arr.shape[0]}")
    return arr


def alpha_centrality(g, alpha: float, e) -> CentralityResult:
    """(I - alpha G)^-1 e"""
    arr = as_square_matrix(g)
    values = _resolvent_solve(arr, alpha, _vector(e, arr.shape[0]))
    return CentralityResult(values, Measure.ALPHA, {"alpha": alpha})


def katz_centrality(g, alpha: float, e, depth: int) -> CentralityResult:
    """Partial sum of alpha^k G^k e for k = 1..depth; residual is the last term"""
    arr = as_square_matrix(g)
    if depth < 1:
        raise ValidationError("depth must be at least 1")
    term = _vector(e, arr.shape[0])
    total = np.zeros_like(term)
    for _ in range(depth):
        term = alpha * (arr @ term)
        total += term
    residual = float(np.max(np.abs(term)))
    return CentralityResult(total, Measure.KATZ, {"alpha": alpha, "depth": depth},
                            Convergence(closed=False, depth=depth, residual=residual))


def katz_closed_form(g, alpha: float, e) -> CentralityResult:
    """((I - alpha G)^-1 - I) e"""
    arr = as_square_matrix(g)
    e = _vector(e, arr.shape[0])
    values = _resolvent_solve(arr, alpha, e) - e
    return CentralityResult(values, Measure.KATZ, {"alpha": alpha})


def bonacich_centrality(r, alpha: float, beta: float) -> CentralityResult:
    """beta (I - alpha R)^-1 R 1"""
    arr = as_square_matrix(r)
    if np.any(np.diag(arr) != 0):
        raise ValidationError("Bonacich centrality expects a zero diagonal")
    values = beta * _resolvent_solve(arr, alpha, arr @ np.ones(arr.shape[0]))
    return CentralityResult(values, Measure.BONACICH, {"alpha": alpha, "beta": beta})


def alternating_walk_terms(g, e, depth: int) -> List[np.ndarray]:
    """(-1)^k G^k e for k = 1..depth: signed walk contributions at alpha = -1"""
    arr = as_square_matrix(g)
    term = _vector(e, arr.shape[0])
    terms = []
    for _ in range(depth):
        term = -(arr @ term)
        terms.append(term.copy())
    return terms


def measure_identity_residuals(a, alpha: float) -> Dict[str, float]:
    """
    Residuals of alpha(A, alpha, 1) = 1 + alpha * bonacich(A, alpha, 1)
    and alpha(A, alpha, 1) = 1 + katz(A, alpha).
    """
    arr = as_square_matrix(a)
    ones = np.ones(arr.shape[0])
    alpha_values = alpha_centrality(arr, alpha, ones).values
    bonacich = bonacich_centrality(arr, alpha, 1.0).values
    katz = katz_closed_form(arr, alpha, ones).values
    return {
        "bonacich": float(np.max(np.abs(alpha_values - (ones + alpha * bonacich)))),
        "katz": float(np.max(np.abs(alpha_values - (ones + katz)))),
    }


def verify_measure_identity(a, alpha: float, tol: Optional[float] = None) -> bool:
    tol = get_settings().TOL if tol is None else tol
    arr = as_square_matrix(a)
    if not is_symmetric(arr) or np.any(np.diag(arr) != 0):
        logger.warning("measure identity needs a symmetric, zero-diagonal matrix")
        return False
    rho = spectral_radius(arr)
    if rho > 0 and abs(alpha) >= 1.0 / rho:
        logger.warning("alpha = %g outside the Katz convergence region |alpha| < %g",
                       alpha, 1.0 / rho)
        return False
    residuals = measure_identity_residuals(arr, alpha)
    return all(value <= tol for value in residuals.values())


def profile_target(game: GameSpec, profile: EffortProfile) -> np.ndarray:
    """Exogenous vector whose alpha = -1 centrality is the interior profile"""
    if profile.outcome is OutcomeKind.NASH:
        return game_model.standalone_target(game)
    if profile.outcome is OutcomeKind.PARETO:
        return game_model.pareto_target(game, profile.weights)
    if profile.partition is None:
        raise ValidationError("semi-cooperative profile carries no coalition partition")
    return game_model.semicoop_target(game, profile.partition, profile.weights)


def centrality_effort_check(game: GameSpec, profile: EffortProfile,
                            tol: Optional[float] = None) -> bool:
    """
    True iff the interior profile equals c_alpha(G, -1, target). For Pareto and
    semi-cooperative kinds the perceived costs are also recomputed as
    c_alpha(Lambda^-1 G_eff' Lambda, -1, c).
    """
    tol = get_settings().TOL if tol is None else tol
    target = profile_target(game, profile)
    slack = (np.eye(game.n) + game.g) @ profile.x - target
    if np.any(slack > tol) or np.any(slack < -tol):
        raise NotInterior(f"profile has nonzero slack {slack.tolist()}")

    if profile.outcome is not OutcomeKind.NASH:
        lam = (profile.weights.values if profile.weights is not None
               else np.ones(game.n))
        g_eff = game.g
        if profile.outcome is OutcomeKind.SEMICOOP:
            g_eff = game_model.coalition_modified_matrix(game.dependence, profile.partition).g
        influence = (g_eff.T * lam[None, :]) / lam[:, None]
        perceived = alpha_centrality(influence, -1.0, game.costs).values
        marginals = np.array([game.benefits[i].derivative(target[i]) for i in range(game.n)])
        if np.max(np.abs(marginals - perceived)) > tol:
            return False

    effort = alpha_centrality(game.g, -1.0, target).values
    return bool(np.max(np.abs(effort - profile.x)) <= tol)
