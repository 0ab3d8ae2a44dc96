"""
Truncated geometric variates by closed-form inverse CDF.

For p > 0 the law on {1..n} is p (1-p)^{k-1} / (1 - (1-p)^n), drawn from one uniform u as
1 + floor(log(1 - u (1 - (1-p)^n)) / log(1-p)). p = 0 is the uniform law on {1..n}.
"""
from dataclasses import dataclass

import numpy as np

from sampler.rng import RngStream

@dataclass(frozen=True)
class TruncGeomSpec:
    """
    Truncated geometric law on {1..n} with success probability p in [0, 1].
    """
    n: int
    p: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"truncation must be at least 1, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"success probability must lie in [0, 1], got {self.p}")

    def pmf(self, k: int) -> float:
        """Probability of k"""
        if not 1 <= k <= self.n:
            return 0.0
        if self.p == 0.0:
            return 1.0 / self.n
        if self.p == 1.0:
            return 1.0 if k == 1 else 0.0
        return (self.p * (1.0 - self.p) ** (k - 1)
                / -np.expm1(self.n * np.log1p(-self.p)))

def trunc_geom_inverse(u: np.ndarray, n: np.ndarray | int, p: float,
                       log_keep: float | None = None) -> np.ndarray:
    """
    Vectorized inverse CDF: maps uniforms u in [0, 1) to variates in {1..n}, one per entry.
    `log_keep` may carry log(1-p) when the caller knows it more accurately than 1-p does.
    """
    u = np.asarray(u, dtype=float)
    n = np.broadcast_to(np.asarray(n, dtype=np.int64), u.shape)
    if p == 0.0:
        k = 1 + np.floor(u * n)
    elif p == 1.0:
        return np.ones(u.shape, dtype=np.int64)
    else:
        if log_keep is None:
            log_keep = np.log1p(-p)
        # 1 - (1-p)^n
        mass = -np.expm1(n * log_keep)
        k = 1 + np.floor(np.log1p(-u * mass) / log_keep)
    return np.clip(k, 1, n).astype(np.int64)

def sample_trunc_geom(spec: TruncGeomSpec, rng: RngStream) -> int:
    """One truncated geometric variate"""
    if spec.n == 1:
        return 1
    return int(trunc_geom_inverse(np.array([rng.uniform()]), spec.n, spec.p)[0])
