"""
Custom Exceptions
Define solver-specific exceptions for better error handling
"""
from typing import Any, Optional, Sequence


class NetGoodException(Exception):
    """Base exception for all library errors"""
    pass


class ValidationError(NetGoodException):
    """Raised when a matrix, game, partition or weight vector is malformed"""
    pass


class DocumentError(ValidationError):
    """Raised when a game document violates the schema"""

    def __init__(self, message: str, field: Optional[str] = None,
                 line: Optional[int] = None):
        super().__init__(message)
        self.field = field
        self.line = line


class DimensionTooLarge(NetGoodException):
    """Raised when an exhaustive test is requested above the enumeration cap"""

    def __init__(self, n: int, cap: int):
        super().__init__(
            f"dimension {n} exceeds the enumeration cap {cap}; "
            f"use a sufficient condition instead")
        self.n = n
        self.cap = cap


class ConvergenceFailure(NetGoodException):
    """Raised when an iterative numerical routine hits its iteration cap"""
    pass


class CycleDetected(NetGoodException):
    """Raised when complementary pivoting exceeds its pivot cap"""
    pass


class SingularSystem(NetGoodException):
    """Raised when a linear system is numerically singular"""
    pass


class DomainError(NetGoodException):
    """Raised when a benefit function is evaluated outside its domain"""
    pass


class CostOutOfRange(NetGoodException):
    """Raised when a (perceived) marginal cost has no finite target effort"""

    def __init__(self, message: str, agents: Sequence[int] = (),
                 values: Sequence[float] = ()):
        super().__init__(message)
        self.agents = list(agents)
        self.values = [float(v) for v in values]


class PerceivedCostOutOfRange(CostOutOfRange):
    """Raised when a network-modified cost admits no interior target"""
    pass


class NotInterior(NetGoodException):
    """Raised when an interior-only characterization meets a boundary profile"""
    pass


class PerturbationFailed(NetGoodException):
    """Raised when one side of an edge perturbation cannot be solved"""

    def __init__(self, side: str, cause: NetGoodException,
                 partial: Optional[Any] = None):
        super().__init__(f"{side} game failed: {cause}")
        self.side = side
        self.cause = cause
        self.partial = partial


class NoEquilibrium(NetGoodException):
    """Raised when a solver finds no profile of the requested kind"""
    pass
