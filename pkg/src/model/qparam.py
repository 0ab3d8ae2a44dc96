"""
model.qparam. The Mallows parameter q and its regime
"""
import math
from dataclasses import dataclass
from enum import Enum, auto

from errors import DomainError

class Regime(Enum):
    """
    Regime of the Mallows parameter
    """
    SUB_CRITICAL = auto()
    CRITICAL = auto()
    SUPER_CRITICAL = auto()

@dataclass(frozen=True)
class QParam:
    """
    A validated Mallows parameter q > 0.

    Operations take either a QParam or a bare float; `QParam.of` normalizes both.
    The `require_*` helpers raise DomainError with the operation name when a formula
    is undefined for the regime, q = 1 included.
    """
    q: float

    def __post_init__(self) -> None:
        if not isinstance(self.q, (int, float)) or not math.isfinite(self.q) or self.q <= 0.0:
            raise DomainError(f"q must be a finite positive real, got {self.q!r}")
        object.__setattr__(self, "q", float(self.q))

    @classmethod
    def of(cls, q: "QParam | float") -> "QParam":
        """Return q as a QParam."""
        return q if isinstance(q, QParam) else cls(q)

    @property
    def regime(self) -> Regime:
        """Regime of q"""
        if self.q < 1.0:
            return Regime.SUB_CRITICAL
        if self.q > 1.0:
            return Regime.SUPER_CRITICAL
        return Regime.CRITICAL

    def inverse(self) -> "QParam":
        """The parameter 1/q"""
        return QParam(1.0 / self.q)

    def require_subcritical(self, operation: str) -> "QParam":
        """Raise DomainError unless 0 < q < 1."""
        if self.regime is not Regime.SUB_CRITICAL:
            raise DomainError(f"{operation} requires 0 < q < 1, got q={self.q}")
        return self

    def require_supercritical(self, operation: str) -> "QParam":
        """Raise DomainError unless q > 1."""
        if self.regime is not Regime.SUPER_CRITICAL:
            raise DomainError(f"{operation} requires q > 1, got q={self.q}")
        return self

    def __str__(self) -> str:
        return f"q={self.q:.12g}"
