"""
model.results. Classes carrying the outcome of a Monte Carlo estimate, a goodness-of-fit
test or an exact enumeration
"""
import math
from dataclasses import dataclass, field

import numpy as np

from model.permutation import Permutation

@dataclass(frozen=True)
class Estimate:
    """
    A Monte Carlo estimate.

    Attributes:
        mean: point estimate.
        std_error: standard error, from replicate-level or block-level variance.
        replicates: number of replicates or blocks behind the estimate.
    """
    mean: float
    std_error: float
    replicates: int

    def __post_init__(self) -> None:
        if self.replicates < 1:
            raise ValueError(f"an estimate needs at least one replicate, got {self.replicates}")
        if not self.std_error >= 0.0:
            raise ValueError(f"standard error must be nonnegative, got {self.std_error}")

    @classmethod
    def from_samples(cls, values: np.ndarray) -> "Estimate":
        """Sample mean with standard error std/sqrt(R); a single replicate has error 0."""
        values = np.asarray(values, dtype=float)
        count = len(values)
        if count == 0:
            raise ValueError("no samples")
        se = float(np.std(values, ddof=1) / math.sqrt(count)) if count > 1 else 0.0
        return cls(mean=float(np.mean(values)), std_error=se, replicates=count)

    def within(self, target: float, bands: float, slack: float = 1e-12) -> bool:
        """True when |mean - target| <= bands * std_error, up to rounding slack"""
        return abs(self.mean - target) <= bands * self.std_error + slack

    def ci95(self) -> tuple[float, float]:
        """Normal 95% confidence interval"""
        half = 1.959963984540054 * self.std_error
        return self.mean - half, self.mean + half

    def __str__(self) -> str:
        return f"{self.mean:.6g} ± {self.std_error:.3g} (R={self.replicates})"

@dataclass(frozen=True, eq=False)
class CovarianceEstimate:
    """
    Plug-in covariance matrix of the renewal CLT, indexed by cycle length 1..ell.
    """
    matrix: np.ndarray = field(repr=False)
    replicates: int

    @property
    def ell(self) -> int:
        """Largest cycle length covered"""
        return self.matrix.shape[0]

    def __getitem__(self, ij: tuple[int, int]) -> float:
        i, j = ij
        return float(self.matrix[i - 1, j - 1])

    def __str__(self) -> str:
        return f"covariance {self.ell}x{self.ell} from {self.replicates} blocks"

@dataclass(frozen=True)
class GofReport:
    """
    Pearson chi-square goodness-of-fit outcome.

    Attributes:
        statistic: Pearson statistic.
        dof: degrees of freedom, cells after merging minus one.
        p_value: upper tail probability of the statistic.
        cells_merged: number of original cells folded into pooled cells.
    """
    statistic: float
    dof: int
    p_value: float
    cells_merged: int

    def passes(self, alpha: float) -> bool:
        """True when the test does not reject at level alpha"""
        return self.p_value > alpha

    def __str__(self) -> str:
        return (f"chi2={self.statistic:.4g} dof={self.dof} p={self.p_value:.4g} "
                f"merged={self.cells_merged}")

@dataclass(frozen=True, eq=False)
class ExactPmf:
    """
    Exact Mallows(n, q) pmf over all of S_n.
    """
    n: int
    q: float
    support: list[Permutation] = field(repr=False)
    probs: np.ndarray = field(repr=False)
    normalizer: float

    def as_map(self) -> dict[tuple[int, ...], float]:
        """pmf keyed by one-line tuples"""
        return {perm.key(): float(p) for perm, p in zip(self.support, self.probs)}

    def __len__(self) -> int:
        return len(self.support)

    def __str__(self) -> str:
        return f"exact pmf n={self.n} q={self.q:.6g} over {len(self.support)} permutations"
