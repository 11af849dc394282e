"""
Linear Complementarity Service
Find x >= 0 with w = M x + q >= 0 and x'w = 0: Lemke's complementary pivoting
for one solution, support enumeration for all of them, and verification
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from netgood.config import get_settings
from netgood.core.exceptions import CycleDetected, DimensionTooLarge, ValidationError
from netgood.services.matrix_analysis import as_square_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LCPInstance:
    """The pair (M, q)"""
    m: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        m = as_square_matrix(self.m)
        q = np.array(self.q, dtype=float).reshape(-1)
        if q.shape[0] != m.shape[0]:
            raise ValidationError(f"M is {m.shape[0]}x{m.shape[0]} but q has length {q.shape[0]}")
        if not np.all(np.isfinite(q)):
            raise ValidationError("q has non-finite entries")
        m.setflags(write=False)
        q.setflags(write=False)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return self.q.shape[0]

    def permuted(self, perm) -> "LCPInstance":
        perm = np.asarray(perm)
        return LCPInstance(self.m[np.ix_(perm, perm)], self.q[perm])


@dataclass(frozen=True, eq=False)
class LCPSolution:
    """A complementary pair; `degenerate` lists indices with x_i = w_i = 0"""
    x: np.ndarray
    w: np.ndarray
    support: Tuple[int, ...]
    degenerate: Tuple[int, ...] = ()

    @classmethod
    def from_x(cls, inst: LCPInstance, x: np.ndarray, tol: float) -> "LCPSolution":
        x = np.where(np.abs(x) <= tol, 0.0, x)
        w = inst.m @ x + inst.q
        w = np.where(np.abs(w) <= tol, 0.0, w)
        support = tuple(int(i) for i in np.nonzero(x > 0)[0])
        degenerate = tuple(int(i) for i in np.nonzero((x == 0) & (w == 0))[0])
        return cls(x=x, w=w, support=support, degenerate=degenerate)


@dataclass(frozen=True)
class RayTermination:
    """Lemke's path left along an unbounded ray; no solution certificate"""
    pivots: int
    entering: str


@dataclass
class SolverDiagnostics:
    """Solver trace collected across calls"""
    pivots: int = 0
    supports_checked: int = 0
    singular_supports: List[Tuple[int, ...]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    residuals: Dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "pivots": self.pivots,
            "supports_checked": self.supports_checked,
            "singular_supports": [list(s) for s in self.singular_supports],
            "notes": list(self.notes),
            "residuals": dict(self.residuals),
        }


def _variable_name(var: int, n: int) -> str:
    if var < n:
        return f"w{var}"
    if var < 2 * n:
        return f"x{var - n}"
    return "z0"


def _lexmin_row(tableau: np.ndarray, rows: np.ndarray, col: int, n: int, tol: float) -> int:
    """
    Lexicographic minimum ratio test: compare (rhs, B^-1 row) / pivot entry.
    The w block of the tableau holds B^-1 since the starting basis is I.
    """
    candidates = rows
    keys = [tableau.shape[1] - 1] + list(range(n))
    for key in keys:
        ratios = tableau[candidates, key] / tableau[candidates, col]
        best = ratios.min()
        candidates = candidates[ratios <= best + tol * max(1.0, abs(best))]
        if candidates.size == 1:
            break
    return int(candidates[0])


def lemke_solve(inst: LCPInstance, tol: Optional[float] = None,
                diagnostics: Optional[SolverDiagnostics] = None) -> Union[LCPSolution, RayTermination]:
    """
    Lemke's method with covering vector 1 on the tableau [I | -M | -1 | q].
    Variables: w_0..w_{n-1}, x_0..x_{n-1}, z0.
    """
    tol = get_settings().TOL if tol is None else tol
    n = inst.n
    m, q = inst.m, inst.q

    if np.all(q >= 0):
        if diagnostics is not None:
            diagnostics.notes.append("q is nonnegative; x = 0 solves")
        return LCPSolution.from_x(inst, np.zeros(n), tol)

    z0 = 2 * n
    tableau = np.hstack([np.eye(n), -m, -np.ones((n, 1)), q.reshape(-1, 1)])
    basis = list(range(n))
    # covering variable enters at the most negative q_i; among ties the
    # highest index keeps every row lexicographically positive
    rows = np.nonzero(q <= q.min() + tol * max(1.0, abs(q.min())))[0]
    pivot_row = int(rows.max())
    entering = z0

    cap = 10 * 2 ** n
    pivots = 0
    while True:
        if pivots >= cap:
            raise CycleDetected(f"Lemke exceeded {cap} pivots on a {n}x{n} instance")
        tableau[pivot_row] /= tableau[pivot_row, entering]
        others = np.arange(n) != pivot_row
        tableau[others] -= np.outer(tableau[others, entering], tableau[pivot_row])
        leaving = basis[pivot_row]
        basis[pivot_row] = entering
        pivots += 1

        if leaving == z0:
            break
        entering = leaving + n if leaving < n else leaving - n
        column = tableau[:, entering]
        rows = np.nonzero(column > tol)[0]
        if rows.size == 0:
            logger.debug("Lemke ray termination after %d pivots entering %s",
                         pivots, _variable_name(entering, n))
            if diagnostics is not None:
                diagnostics.pivots += pivots
            return RayTermination(pivots=pivots, entering=_variable_name(entering, n))
        pivot_row = _lexmin_row(tableau, rows, entering, n, tol)

    x = np.zeros(n)
    for row, var in enumerate(basis):
        if n <= var < 2 * n:
            x[var - n] = tableau[row, -1]
    if diagnostics is not None:
        diagnostics.pivots += pivots
    logger.debug("Lemke solved %dx%d instance in %d pivots", n, n, pivots)
    return LCPSolution.from_x(inst, np.maximum(x, 0.0), tol)


def enumerate_solutions(inst: LCPInstance, tol: Optional[float] = None,
                        cap: Optional[int] = None,
                        diagnostics: Optional[SolverDiagnostics] = None) -> List[LCPSolution]:
    """
    Every solution, by solving (M x + q)_S = 0, x outside S = 0 for all 2^n
    supports S. Singular subsystems are skipped and recorded.
    """
    settings = get_settings()
    tol = settings.TOL if tol is None else tol
    cap = settings.ENUMERATION_CAP if cap is None else cap
    n = inst.n
    if n > cap:
        raise DimensionTooLarge(n, cap)
    m, q = inst.m, inst.q

    found: List[LCPSolution] = []
    checked = 0
    for k in range(n + 1):
        for support in itertools.combinations(range(n), k):
            checked += 1
            x = np.zeros(n)
            if k:
                idx = list(support)
                sub = m[np.ix_(idx, idx)]
                if 1.0 / np.linalg.cond(sub, 1) < settings.SINGULAR_RCOND:
                    if diagnostics is not None:
                        diagnostics.singular_supports.append(support)
                    continue
                x[idx] = np.linalg.solve(sub, -q[idx])
            w = m @ x + q
            off = np.ones(n, dtype=bool)
            off[list(support)] = False
            if np.all(x >= -tol) and np.all(w[off] >= -tol):
                candidate = LCPSolution.from_x(inst, np.maximum(x, 0.0), tol)
                if not any(np.max(np.abs(candidate.x - s.x), initial=0.0) <= settings.DEDUP_TOL
                           for s in found):
                    found.append(candidate)

    if diagnostics is not None:
        diagnostics.supports_checked += checked
    found.sort(key=lambda s: tuple(s.x))
    logger.debug("support enumeration on n=%d found %d solutions", n, len(found))
    return found


def verify_solution(inst: LCPInstance, sol: LCPSolution, tol: Optional[float] = None) -> bool:
    tol = get_settings().TOL if tol is None else tol
    x = np.asarray(sol.x, dtype=float)
    w = np.asarray(sol.w, dtype=float)
    if x.shape != (inst.n,) or w.shape != (inst.n,):
        raise ValidationError("solution dimensions disagree with the instance")
    residual = np.max(np.abs(w - (inst.m @ x + inst.q)))
    return bool(
        residual <= tol
        and x.min() >= -tol
        and w.min() >= -tol
        and abs(float(x @ w)) <= tol * inst.n
    )
