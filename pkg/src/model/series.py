"""
model.series. Results of the certified q-series evaluations
"""
import math
from dataclasses import dataclass, field

import numpy as np

from model.qparam import QParam

@dataclass(frozen=True)
class DisplacementPmf:
    """
    Law of the displacement Sigma(0) of the bi-infinite Mallows model, truncated to [-D..D].

    Attributes:
        q: parameter in (0, 1).
        probs: probabilities indexed by d + D for d in [-D..D], exactly symmetric.
        tail_bound: certified probability mass outside the window.
    """
    q: QParam
    probs: np.ndarray = field(repr=False)
    tail_bound: float

    @property
    def window(self) -> int:
        """Half-width D of the window"""
        return (len(self.probs) - 1) // 2

    @property
    def support(self) -> np.ndarray:
        """Displacements d covered by the window"""
        return np.arange(-self.window, self.window + 1)

    def __getitem__(self, d: int) -> float:
        if abs(d) > self.window:
            return 0.0
        return float(self.probs[d + self.window])

    def total(self) -> float:
        """Window mass, compensated sum"""
        return math.fsum(self.probs)

    def odd_mass(self) -> float:
        """P(Sigma(0) odd) within the window"""
        return math.fsum(self.probs[(self.support % 2) != 0])

    def even_mass(self) -> float:
        """P(Sigma(0) even) within the window"""
        return math.fsum(self.probs[(self.support % 2) == 0])

    def __str__(self) -> str:
        return f"displacement pmf {self.q} D={self.window} tail<={self.tail_bound:.3g}"

@dataclass(frozen=True)
class StationaryArc:
    """
    Stationary law nu of the infinite arc chain, truncated to states [0..S].
    """
    q: QParam
    weights: np.ndarray = field(repr=False)
    tail_bound: float

    def __getitem__(self, s: int) -> float:
        if s < 0 or s >= len(self.weights):
            return 0.0
        return float(self.weights[s])

    def __len__(self) -> int:
        return len(self.weights)

@dataclass(frozen=True)
class ExactConstants:
    """
    Limiting constants for one q. Constants undefined for the regime are NaN:
    m1 exists for q < 1, mu2, c_e and c_o for q > 1.
    """
    q: float
    m1: float = math.nan
    mu2: float = math.nan
    c_e: float = math.nan
    c_o: float = math.nan
    tol: float = math.nan

    def as_row(self) -> dict[str, float]:
        """CSV row (q, m1, mu2, c_e, c_o, tol)"""
        return {"q": self.q, "m1": self.m1, "mu2": self.mu2, "c_e": self.c_e, "c_o": self.c_o,
                "tol": self.tol}
