"""
Game Models
Immutable domain types for public-good provision games on weighted networks
"""
import enum
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import ClassVar, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from netgood.core.exceptions import DomainError, ValidationError


def _frozen_array(values, name: str, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise ValidationError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite entries")
    arr.setflags(write=False)
    return arr


class OutcomeKind(str, enum.Enum):
    """Effort outcome enumeration"""
    NASH = "nash"
    PARETO = "pareto"
    SEMICOOP = "coalition"


class BenefitFamily(str, enum.Enum):
    """Benefit function families"""
    EXPONENTIAL = "exponential"
    LOGARITHMIC = "logarithmic"


# Parameter keys accepted by each family
FAMILY_PARAMS: Dict[BenefitFamily, Tuple[str, ...]] = {
    BenefitFamily.EXPONENTIAL: ("saturation",),
    BenefitFamily.LOGARITHMIC: ("a",),
}


# ============================================================================
# Benefit functions
# ============================================================================

class BenefitFunction(ABC):
    """
    Strictly increasing, strictly concave benefit of aggregate effort.
    Subclasses expose b, b' and the inverse of b' on (0, inf).
    """
    family: ClassVar[BenefitFamily]

    @abstractmethod
    def value(self, y: float) -> float:
        ...

    @abstractmethod
    def derivative(self, y: float) -> float:
        ...

    @abstractmethod
    def inverse_derivative(self, m: float) -> float:
        """Aggregate effort at which the marginal benefit equals m"""
        ...

    @abstractmethod
    def params(self) -> Dict[str, float]:
        ...

    def in_derivative_range(self, m: float) -> bool:
        # both families have b'((lower, inf)) = (0, inf)
        return math.isfinite(m) and m > 0.0

    def is_well_shaped(self, points: Optional[Iterable[float]] = None,
                       step: float = 1e-4) -> bool:
        """Sampled check of b' > 0 and b'' < 0 on y >= 0"""
        ys = np.linspace(0.0, 10.0, 21) if points is None else np.asarray(list(points), float)
        for y in ys:
            if self.derivative(y) <= 0.0:
                return False
            curvature = (self.derivative(y + step) - self.derivative(y - step)) / (2 * step)
            if curvature >= 0.0:
                return False
        return True

    @staticmethod
    def from_spec(family: str, params: Mapping[str, float]) -> "BenefitFunction":
        """Build a benefit function from a family name and parameter map"""
        try:
            kind = BenefitFamily(family.lower())
        except ValueError:
            raise ValidationError(
                f"unknown benefit family {family!r}; "
                f"expected one of {[f.value for f in BenefitFamily]}")
        unknown = sorted(set(params) - set(FAMILY_PARAMS[kind]))
        if unknown:
            raise ValidationError(
                f"{kind.value} benefit takes {list(FAMILY_PARAMS[kind])}, got {unknown}")
        if kind is BenefitFamily.EXPONENTIAL:
            return Exponential(float(params.get("saturation", 1.0)))
        return Logarithmic(float(params.get("a", 1.0)))


@dataclass(frozen=True)
class Exponential(BenefitFunction):
    """b(y) = s * (1 - exp(-y / s)); defined on the whole real line"""
    saturation: float = 1.0
    family: ClassVar[BenefitFamily] = BenefitFamily.EXPONENTIAL

    def __post_init__(self):
        if not (math.isfinite(self.saturation) and self.saturation > 0):
            raise ValidationError(f"saturation must be positive, got {self.saturation}")

    def value(self, y: float) -> float:
        return self.saturation * -math.expm1(-y / self.saturation)

    def derivative(self, y: float) -> float:
        return math.exp(-y / self.saturation)

    def inverse_derivative(self, m: float) -> float:
        if not self.in_derivative_range(m):
            raise DomainError(f"marginal benefit {m} outside (0, inf)")
        return -self.saturation * math.log(m)

    def params(self) -> Dict[str, float]:
        return {"saturation": self.saturation}


@dataclass(frozen=True)
class Logarithmic(BenefitFunction):
    """b(y) = a * ln(1 + y); defined for y > -1"""
    a: float = 1.0
    family: ClassVar[BenefitFamily] = BenefitFamily.LOGARITHMIC

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0):
            raise ValidationError(f"a must be positive, got {self.a}")

    def _check(self, y: float):
        if 1.0 + y <= 0.0:
            raise DomainError(f"logarithmic benefit undefined at aggregate {y}")

    def value(self, y: float) -> float:
        self._check(y)
        return self.a * math.log1p(y)

    def derivative(self, y: float) -> float:
        self._check(y)
        return self.a / (1.0 + y)

    def inverse_derivative(self, m: float) -> float:
        if not self.in_derivative_range(m):
            raise DomainError(f"marginal benefit {m} outside (0, inf)")
        return self.a / m - 1.0

    def params(self) -> Dict[str, float]:
        return {"a": self.a}


# ============================================================================
# Network and game
# ============================================================================

@dataclass(frozen=True, eq=False)
class DependenceMatrix:
    """
    Weighted directed dependence network.
    g[i, j] is how much agent i depends on agent j's effort
    (> 0 substitutes, < 0 complements). The diagonal is exactly zero.
    """
    g: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.g, "dependence matrix", 2)
        if arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ValidationError(f"dependence matrix must be square and non-empty, got {arr.shape}")
        if np.any(np.diag(arr) != 0.0):
            raise ValidationError("dependence matrix must have an exactly zero diagonal")
        object.__setattr__(self, "g", arr)

    @property
    def n(self) -> int:
        return self.g.shape[0]

    @classmethod
    def zeros(cls, n: int) -> "DependenceMatrix":
        return cls(np.zeros((n, n)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int, float]]) -> "DependenceMatrix":
        g = np.zeros((n, n))
        for i, j, weight in edges:
            if i == j:
                raise ValidationError(f"self-loop on agent {i}")
            g[i, j] = weight
        return cls(g)

    def edges(self) -> List[Tuple[int, int, float]]:
        """Nonzero entries as (from, to, weight), row-major"""
        rows, cols = np.nonzero(self.g)
        return [(int(i), int(j), float(self.g[i, j])) for i, j in zip(rows, cols)]

    def with_weight(self, i: int, j: int, weight: float) -> "DependenceMatrix":
        if i == j:
            raise ValidationError(f"self-loop on agent {i}")
        g = self.g.copy()
        g[i, j] = weight
        return DependenceMatrix(g)

    def __eq__(self, other) -> bool:
        return isinstance(other, DependenceMatrix) and np.array_equal(self.g, other.g)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class GameSpec:
    """Dependence network plus per-agent benefit functions and marginal costs"""
    dependence: DependenceMatrix
    benefits: Tuple[BenefitFunction, ...]
    costs: np.ndarray

    def __post_init__(self):
        costs = _frozen_array(self.costs, "costs", 1)
        benefits = tuple(self.benefits)
        n = self.dependence.n
        if costs.shape[0] != n or len(benefits) != n:
            raise ValidationError(
                f"game has {n} agents but {costs.shape[0]} costs and {len(benefits)} benefits")
        if np.any(costs <= 0):
            raise ValidationError("marginal costs must be strictly positive")
        for i, b in enumerate(benefits):
            if not b.is_well_shaped():
                raise ValidationError(f"benefit of agent {i} is not increasing and concave")
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "benefits", benefits)

    @property
    def n(self) -> int:
        return self.dependence.n

    @property
    def g(self) -> np.ndarray:
        return self.dependence.g

    @classmethod
    def uniform(cls, g, benefit: BenefitFunction, cost: float) -> "GameSpec":
        """Every agent shares one benefit function and one marginal cost"""
        dep = g if isinstance(g, DependenceMatrix) else DependenceMatrix(np.asarray(g, float))
        return cls(dep, (benefit,) * dep.n, np.full(dep.n, float(cost)))

    @classmethod
    def from_matrix(cls, g, benefits: Sequence[BenefitFunction], costs) -> "GameSpec":
        return cls(DependenceMatrix(np.asarray(g, float)), tuple(benefits),
                   np.asarray(costs, float))

    def with_dependence(self, dependence: DependenceMatrix) -> "GameSpec":
        return replace(self, dependence=dependence)


@dataclass(frozen=True)
class CoalitionPartition:
    """Disjoint, non-empty agent blocks covering every agent"""
    blocks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(i) for i in block)) for block in self.blocks)
        if any(len(block) == 0 for block in blocks):
            raise ValidationError("coalitions must be non-empty")
        object.__setattr__(self, "blocks", blocks)

    def validate(self, n: int) -> "CoalitionPartition":
        members = [i for block in self.blocks for i in block]
        if len(members) != len(set(members)):
            raise ValidationError("coalitions must be disjoint")
        if sorted(members) != list(range(n)):
            raise ValidationError(f"coalitions must cover agents 0..{n - 1} exactly")
        return self

    def labels(self, n: int) -> np.ndarray:
        """Coalition index of every agent"""
        self.validate(n)
        out = np.empty(n, dtype=int)
        for k, block in enumerate(self.blocks):
            out[list(block)] = k
        return out

    @classmethod
    def singletons(cls, n: int) -> "CoalitionPartition":
        return cls(tuple((i,) for i in range(n)))

    @classmethod
    def grand(cls, n: int) -> "CoalitionPartition":
        return cls((tuple(range(n)),))


@dataclass(frozen=True, eq=False)
class WelfareWeights:
    """Strictly positive Pareto weights"""
    values: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.values, "welfare weights", 1)
        if np.any(arr <= 0):
            raise ValidationError("welfare weights must be strictly positive")
        object.__setattr__(self, "values", arr)

    @classmethod
    def ones(cls, n: int) -> "WelfareWeights":
        return cls(np.ones(n))

    def check(self, n: int) -> "WelfareWeights":
        if self.values.shape[0] != n:
            raise ValidationError(f"expected {n} welfare weights, got {self.values.shape[0]}")
        return self


@dataclass(frozen=True, eq=False)
class EffortProfile:
    """Nonnegative effort vector tagged with the outcome that produced it"""
    x: np.ndarray
    outcome: OutcomeKind = OutcomeKind.NASH
    weights: Optional[WelfareWeights] = None
    partition: Optional[CoalitionPartition] = None
    w: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        x = _frozen_array(self.x, "effort profile", 1)
        if np.any(x < 0):
            raise ValidationError("effort levels must be nonnegative")
        object.__setattr__(self, "x", x)
        if self.w is not None:
            object.__setattr__(self, "w", _frozen_array(self.w, "slack vector", 1))


def as_vector(values: Sequence[float], n: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != (n,):
        raise ValidationError(f"{name} must have length {n}, got shape {arr.shape}")
    return arr
