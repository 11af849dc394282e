"""
Matrix Analysis Service
Membership tests for the matrix classes that decide existence and uniqueness
of equilibria (P, Z, L, S, strictly diagonally dominant), plus spectral quantities
"""
import enum
import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Union

import numpy as np
import scipy.linalg

from netgood.config import get_settings
from netgood.core.exceptions import ConvergenceFailure, DimensionTooLarge, ValidationError
from netgood.models.game import DependenceMatrix
from netgood.services.simplex import find_feasible_point

logger = logging.getLogger(__name__)

# Principal minors of one order are factorized in stacks of this many
_MINOR_BATCH = 4096


class Uniqueness(str, enum.Enum):
    UNIQUE = "unique"
    NOT_UNIQUE = "not_unique"


class Existence(str, enum.Enum):
    ALWAYS = "always"
    IFF_SPECTRAL_RADIUS_LT_ONE = "iff_spectral_radius_lt_one"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ClassificationReport:
    """Matrix-class flags for I + G and G, with existence/uniqueness verdicts"""
    n: int
    is_p: bool
    is_z: bool
    is_l: bool
    is_s: bool
    is_sdd: bool
    is_pd: bool
    is_symmetric: bool
    is_nonnegative: bool
    spectral_radius: float
    min_real_eigenvalue: Optional[float]
    uniqueness_verdict: Uniqueness
    existence_verdict: Existence
    existence_holds: Optional[bool]
    citations: List[str] = field(default_factory=list)
    # symmetric G only: |lambda_min(G)| < 1
    min_eigenvalue_uniqueness: Optional[bool] = None


def as_square_matrix(m) -> np.ndarray:
    """Validate and return a dense float copy of a square matrix"""
    if isinstance(m, DependenceMatrix):
        m = m.g
    arr = np.array(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValidationError(f"expected a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("matrix has non-finite entries")
    return arr


def _subsets(n: int, k: int) -> Iterator[np.ndarray]:
    combos = itertools.combinations(range(n), k)
    while True:
        chunk = list(itertools.islice(combos, _MINOR_BATCH))
        if not chunk:
            return
        yield np.array(chunk, dtype=int)


def is_p_matrix(m, tol: Optional[float] = None, cap: Optional[int] = None) -> bool:
    """
    True iff every principal minor has determinant > tol * scale^k,
    scale being the largest absolute entry and k the minor's order.
    """
    settings = get_settings()
    tol = settings.TOL if tol is None else tol
    cap = settings.ENUMERATION_CAP if cap is None else cap
    arr = as_square_matrix(m)
    n = arr.shape[0]
    if n > cap:
        raise DimensionTooLarge(n, cap)

    scale = float(np.max(np.abs(arr)))
    if scale == 0.0:
        return False
    for k in range(1, n + 1):
        log_threshold = np.log(tol) + k * np.log(scale)
        for idx in _subsets(n, k):
            minors = arr[idx[:, :, None], idx[:, None, :]]
            # slogdet factorizes each minor by LU with partial pivoting
            sign, logdet = np.linalg.slogdet(minors)
            bad = (sign <= 0) | (logdet <= log_threshold)
            if np.any(bad):
                logger.debug("non-positive principal minor on rows %s",
                             idx[int(np.argmax(bad))].tolist())
                return False
    return True


def is_z_matrix(m) -> bool:
    arr = as_square_matrix(m)
    off = arr[~np.eye(arr.shape[0], dtype=bool)]
    return bool(np.all(off <= 0))


def is_l_matrix(m) -> bool:
    arr = as_square_matrix(m)
    return is_z_matrix(arr) and bool(np.all(np.diag(arr) > 0))


def is_s_matrix(m, tol: Optional[float] = None) -> bool:
    """
    True iff some x >= 1 has M x >= 1 (equivalently x > 0 with M x > 0).
    Substituting x = 1 + y gives the standard-form system
    [M, -I] [y; s] = 1 - M 1 with y, s >= 0.
    """
    tol = get_settings().TOL if tol is None else tol
    arr = as_square_matrix(m)
    n = arr.shape[0]
    ones = np.ones(n)
    a = np.hstack([arr, -np.eye(n)])
    b = ones - arr @ ones
    return find_feasible_point(a, b, tol=tol) is not None


def is_strictly_diagonally_dominant(m) -> bool:
    arr = as_square_matrix(m)
    absolute = np.abs(arr)
    diag = np.diag(absolute)
    return bool(np.all(diag > absolute.sum(axis=1) - diag))


def is_symmetric(m, tol: Optional[float] = None) -> bool:
    tol = get_settings().TOL if tol is None else tol
    arr = as_square_matrix(m)
    return bool(np.allclose(arr, arr.T, rtol=0.0, atol=tol))


def is_positive_definite(m) -> bool:
    """Positive definiteness of the symmetric part (x' M x > 0 for x != 0)"""
    arr = as_square_matrix(m)
    sym = 0.5 * (arr + arr.T)
    try:
        np.linalg.cholesky(sym)
    except np.linalg.LinAlgError:
        return False
    return True


def eigenvalues(m) -> np.ndarray:
    """
    All eigenvalues of a dense matrix. LAPACK geev reduces to Hessenberg form
    and runs the shifted QR iteration.
    """
    arr = as_square_matrix(m)
    try:
        return scipy.linalg.eigvals(arr, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigenvalue iteration did not converge: {exc}")


def spectral_radius(m, tol: Optional[float] = None) -> float:
    """
    Largest eigenvalue modulus, accurate to tol * ||m||_inf. A radius at or
    below that accuracy is reported as 0.
    """
    arr = as_square_matrix(m)
    tol = get_settings().TOL if tol is None else tol
    rho = float(np.max(np.abs(eigenvalues(arr)), initial=0.0))
    if rho <= tol * np.linalg.norm(arr, np.inf):
        return 0.0
    return rho


def min_real_eigenvalue(m, tol: Optional[float] = None) -> Optional[float]:
    """Smallest real eigenvalue, or None when every eigenvalue is complex"""
    arr = as_square_matrix(m)
    imag_tol = get_settings().IMAG_TOL if tol is None else tol
    vals = eigenvalues(arr)
    threshold = imag_tol * (1.0 + np.linalg.norm(arr, np.inf))
    real = vals.real[np.abs(vals.imag) <= threshold]
    if real.size == 0:
        return None
    return float(np.min(real))


def classify(g: Union[DependenceMatrix, np.ndarray], tol: Optional[float] = None,
             cap: Optional[int] = None) -> ClassificationReport:
    """
    Flags for I + G (P, S, SDD, PD) and for G (Z, nonnegativity, spectrum),
    and the existence/uniqueness verdicts they imply.
    """
    tol = get_settings().TOL if tol is None else tol
    arr = as_square_matrix(g)
    n = arr.shape[0]
    m = np.eye(n) + arr

    p = is_p_matrix(m, tol=tol, cap=cap)
    z = is_z_matrix(arr)
    nonnegative = bool(np.all(arr >= 0))
    symmetric = is_symmetric(arr, tol=tol)
    rho = spectral_radius(arr)
    lam_min = min_real_eigenvalue(arr)

    report = ClassificationReport(
        n=n,
        is_p=p,
        is_z=z,
        is_l=is_l_matrix(m),
        is_s=is_s_matrix(m, tol=tol),
        is_sdd=is_strictly_diagonally_dominant(m),
        is_pd=is_positive_definite(m),
        is_symmetric=symmetric,
        is_nonnegative=nonnegative,
        spectral_radius=rho,
        min_real_eigenvalue=lam_min,
        uniqueness_verdict=Uniqueness.UNIQUE if p else Uniqueness.NOT_UNIQUE,
        existence_verdict=Existence.INCONCLUSIVE,
        existence_holds=None,
    )

    report.citations.append("p-matrix-uniqueness")
    if nonnegative:
        report.existence_verdict = Existence.ALWAYS
        report.existence_holds = True
        report.citations.append("nonnegative-existence")
    elif z:
        report.existence_verdict = Existence.IFF_SPECTRAL_RADIUS_LT_ONE
        report.existence_holds = rho < 1.0
        report.citations.append("z-matrix-spectral-existence")
    elif p:
        report.existence_verdict = Existence.ALWAYS
        report.existence_holds = True

    if z:
        report.citations.append("z-matrix-s-matrix-equivalence")
    if symmetric:
        report.citations.append("symmetric-min-eigenvalue")
        report.min_eigenvalue_uniqueness = lam_min is not None and abs(lam_min) < 1.0
    if report.is_sdd:
        report.citations.append("diagonal-dominance-uniqueness")
    if report.is_pd:
        report.citations.append("positive-definite-uniqueness")

    logger.debug("classified %dx%d dependence matrix: P=%s rho=%.6g", n, n, p, rho)
    return report
