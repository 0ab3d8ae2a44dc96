"""
Additive statistics: functionals f with f(w) = f(w_1) + f(w_2) whenever w splits into two
self-mapped blocks. Evaluated block by block, they feed the renewal estimators.
"""
from typing import Callable, Sequence

import numpy as np

from model.blocks import PairedRegenBlock, RegenBlock
from model.permutation import Permutation
from permstat.statistics import cycle_counts, descents

BlockStatistic = Callable[[Permutation], float | np.ndarray]

def additive_statistic(f: BlockStatistic,
                       blocks: Sequence[RegenBlock] | Sequence[PairedRegenBlock]) -> np.ndarray:
    """Y_i = f(block i's internal permutation), one row per block"""
    return np.asarray([f(block.perm) for block in blocks], dtype=float)

def block_length(perm: Permutation) -> float:
    """X"""
    return float(perm.n)

def fixed_point_count(perm: Permutation) -> float:
    """C_1"""
    return float(np.count_nonzero(perm.images == np.arange(1, perm.n + 1)))

def total_cycle_count(perm: Permutation) -> float:
    """Number of cycles"""
    return float(cycle_counts(perm).total_cycles)

def descent_count(perm: Permutation) -> float:
    """Descents never straddle a regeneration time, so they add up over blocks."""
    return float(descents(perm))

def cycle_count_vector(ell: int) -> BlockStatistic:
    """(C_1, ..., C_ell) as a block statistic"""
    def _vector(perm: Permutation) -> np.ndarray:
        return cycle_counts(perm).vector(ell).astype(float)
    return _vector
