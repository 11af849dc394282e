"""
Phase-one simplex
Feasibility of {A x = b, x >= 0} on a dense tableau with Bland's rule
"""
import logging
from typing import Optional

import numpy as np

from netgood.config import get_settings
from netgood.core.exceptions import ConvergenceFailure, ValidationError

logger = logging.getLogger(__name__)


def _pivot(tableau: np.ndarray, row: int, col: int):
    tableau[row] /= tableau[row, col]
    others = np.arange(tableau.shape[0]) != row
    tableau[others] -= np.outer(tableau[others, col], tableau[row])


def find_feasible_point(a, b, tol: Optional[float] = None,
                        max_pivots: Optional[int] = None) -> Optional[np.ndarray]:
    """
    Minimize the sum of artificial variables over A x + s = b (b >= 0 after
    row sign flips). Returns a feasible x, or None when the minimum is positive.

    Entering column: lowest index with negative reduced cost.
    Leaving row: minimum ratio, ties to the lowest basic variable index.
    """
    tol = get_settings().TOL if tol is None else tol
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float).reshape(-1)
    if a.ndim != 2 or a.shape[0] != b.shape[0]:
        raise ValidationError(f"constraint shapes disagree: A {a.shape}, b {b.shape}")
    m, n = a.shape
    max_pivots = 100 * (m + n) if max_pivots is None else max_pivots

    flip = b < 0
    a[flip] *= -1.0
    b[flip] *= -1.0

    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = a
    tableau[:m, n:n + m] = np.eye(m)
    tableau[:m, -1] = b
    # reduced costs of the artificial objective; the last entry holds -objective
    tableau[m, :n] = -a.sum(axis=0)
    tableau[m, -1] = -b.sum()
    basis = list(range(n, n + m))

    for pivots in range(max_pivots):
        costs = tableau[m, :n]
        candidates = np.nonzero(costs < -tol)[0]
        if candidates.size == 0:
            break
        entering = int(candidates[0])
        column = tableau[:m, entering]
        rows = np.nonzero(column > tol)[0]
        if rows.size == 0:
            # the artificial objective is bounded below by zero
            break
        ratios = tableau[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + tol]
        leaving = int(min(ties, key=lambda r: basis[r]))
        _pivot(tableau, leaving, entering)
        basis[leaving] = entering
    else:
        raise ConvergenceFailure(f"phase-one simplex exceeded {max_pivots} pivots")

    infeasibility = -tableau[m, -1]
    scale = 1.0 + float(np.max(np.abs(b), initial=0.0))
    logger.debug("phase one finished after %d pivots, residual %.3g", pivots, infeasibility)
    if infeasibility > tol * scale:
        return None

    x = np.zeros(n)
    for row, var in enumerate(basis):
        if var < n:
            x[var] = tableau[row, -1]
    return np.maximum(x, 0.0)
