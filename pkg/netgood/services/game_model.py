"""
Game Model Service
Payoffs, best replies, and the LCP data (M, q) and target vectors behind
Nash, Pareto and semi-cooperative effort profiles
"""
import logging
from typing import Optional

import numpy as np

from netgood.config import get_settings
from netgood.core.exceptions import (
    CostOutOfRange,
    PerceivedCostOutOfRange,
    SingularSystem,
    ValidationError,
)
from netgood.models.game import (
    CoalitionPartition,
    DependenceMatrix,
    GameSpec,
    WelfareWeights,
    as_vector,
)
from netgood.services.lcp import LCPInstance

logger = logging.getLogger(__name__)


def _profile(game: GameSpec, x) -> np.ndarray:
    x = as_vector(x, game.n, "effort profile")
    if np.any(x < 0):
        raise ValidationError("effort levels must be nonnegative")
    return x


def _weights(game: GameSpec, lam) -> WelfareWeights:
    if lam is None:
        return WelfareWeights.ones(game.n)
    if not isinstance(lam, WelfareWeights):
        lam = WelfareWeights(np.asarray(lam, dtype=float))
    return lam.check(game.n)


def aggregates(game: GameSpec, x) -> np.ndarray:
    """x_i + sum_j g_ij x_j for every agent"""
    return np.asarray(x, float) + game.g @ np.asarray(x, float)


def utility(game: GameSpec, x, i: int) -> float:
    """b_i(x_i + sum_j g_ij x_j) - c_i x_i"""
    x = _profile(game, x)
    aggregate = x[i] + float(game.g[i] @ x)
    return game.benefits[i].value(aggregate) - game.costs[i] * x[i]


def social_welfare(game: GameSpec, x, lam=None) -> float:
    """sum_k lambda_k u_k(x)"""
    weights = _weights(game, lam).values
    return float(sum(weights[k] * utility(game, x, k) for k in range(game.n)))


def _invert_marginals(game: GameSpec, marginals: np.ndarray,
                      error: type, label: str) -> np.ndarray:
    bad = [i for i in range(game.n) if not game.benefits[i].in_derivative_range(marginals[i])]
    if bad:
        raise error(
            f"{label} outside the range of b' for agents {bad}: "
            f"{[float(marginals[i]) for i in bad]}",
            agents=bad, values=[marginals[i] for i in bad])
    return np.array([game.benefits[i].inverse_derivative(marginals[i]) for i in range(game.n)])


def standalone_target(game: GameSpec) -> np.ndarray:
    """q_bar_i with b_i'(q_bar_i) = c_i"""
    return _invert_marginals(game, game.costs, CostOutOfRange, "marginal cost")


def best_response(game: GameSpec, i: int, x) -> float:
    """max(0, q_bar_i - sum_{j != i} g_ij x_j)"""
    x = _profile(game, x)
    qbar = standalone_target(game)
    return max(0.0, float(qbar[i] - game.g[i] @ x))


def nash_lcp(game: GameSpec) -> LCPInstance:
    """LCP (I + G, -q_bar)"""
    return LCPInstance(np.eye(game.n) + game.g, -standalone_target(game))


def _solve_checked(a: np.ndarray, b: np.ndarray, what: str) -> np.ndarray:
    rcond = get_settings().SINGULAR_RCOND
    if 1.0 / np.linalg.cond(a, 1) < rcond:
        raise SingularSystem(f"{what} is numerically singular")
    return np.linalg.solve(a, b)


def interior_profile(game: GameSpec, target) -> np.ndarray:
    """(I + G)^-1 target: the profile with zero slack for a given target"""
    target = as_vector(target, game.n, "target")
    return _solve_checked(np.eye(game.n) + game.g, target, "I + G")


def perceived_costs(game: GameSpec, lam=None,
                    g_effective: Optional[np.ndarray] = None) -> np.ndarray:
    """
    (I + Lambda^-1 G_eff' Lambda)^-1 c; G_eff is G for Pareto targets and the
    coalition-modified matrix for semi-cooperative ones.
    """
    weights = _weights(game, lam).values
    if g_effective is None:
        g_eff = game.g
    elif isinstance(g_effective, DependenceMatrix):
        g_eff = g_effective.g
    else:
        g_eff = np.asarray(g_effective, float)
    modified = (g_eff.T * weights[None, :]) / weights[:, None]
    return _solve_checked(np.eye(game.n) + modified, game.costs,
                          "I + Lambda^-1 G' Lambda")


def pareto_target(game: GameSpec, lam=None) -> np.ndarray:
    """q^lambda_i = (b_i')^-1(perceived cost_i)"""
    costs = perceived_costs(game, lam)
    return _invert_marginals(game, costs, PerceivedCostOutOfRange, "perceived cost")


def coalition_modified_matrix(g, partition: CoalitionPartition) -> DependenceMatrix:
    """Copy of G with every edge between different coalitions removed"""
    arr = g.g if isinstance(g, DependenceMatrix) else np.asarray(g, float)
    labels = partition.labels(arr.shape[0])
    same = labels[:, None] == labels[None, :]
    return DependenceMatrix(np.where(same, arr, 0.0))


def semicoop_target(game: GameSpec, partition: CoalitionPartition, lam=None) -> np.ndarray:
    """q^{C,lambda}_i = (b_i')^-1(perceived cost_i under G_C)"""
    g_c = coalition_modified_matrix(game.dependence, partition)
    costs = perceived_costs(game, lam, g_c.g)
    return _invert_marginals(game, costs, PerceivedCostOutOfRange, "perceived cost")


def _marginal_benefits(game: GameSpec, x: np.ndarray) -> np.ndarray:
    agg = aggregates(game, x)
    return np.array([game.benefits[k].derivative(agg[k]) for k in range(game.n)])


def coalition_foc_residual(game: GameSpec, partition: CoalitionPartition, lam, x) -> np.ndarray:
    """
    b_i'(agg_i) + sum_{k in C(i)} (lambda_k / lambda_i) g_ki b_k'(agg_k) - c_i:
    first-order residual of agent i's coalition welfare problem.
    """
    x = _profile(game, x)
    weights = _weights(game, lam).values
    g_c = coalition_modified_matrix(game.dependence, partition).g
    marginal = _marginal_benefits(game, x)
    spill = (g_c.T * weights[None, :]) @ marginal / weights
    return marginal + spill - game.costs


def pareto_foc_residual(game: GameSpec, lam, x) -> np.ndarray:
    """Pareto first-order residual; zero at an interior Pareto profile"""
    return coalition_foc_residual(game, CoalitionPartition.grand(game.n), lam, x)
