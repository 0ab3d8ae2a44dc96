"""
Deterministic statistics of a single permutation or window: inversions, cycle
histograms (optionally after a reflection), reflected fixed points, arc paths,
regeneration flags and descents.
"""
import logging
from logging import Logger

import numpy as np

from errors import ReflectionError
from model.order_statistic import OrderStatisticTree
from model.permutation import ArcPath, CycleCounts, Permutation, Reflection, WindowPermutation

logger: Logger = logging.getLogger(__name__)

def inversions(perm: Permutation) -> int:
    """Number of pairs i < j with pi(i) > pi(j), in O(n log n)."""
    seen = OrderStatisticTree(perm.n, filled=False)
    total = 0
    for count, value in enumerate(perm.images.tolist()):
        total += count - seen.prefix_count(value)
        seen.insert(value)
    return total

def _successors(perm: Permutation | WindowPermutation, composed_with: Reflection) -> list[int]:
    """0-based successor list of the (possibly reflected) map on its own index positions"""
    if isinstance(perm, Permutation):
        if composed_with is not Reflection.NONE:
            raise ReflectionError(f"reflection {composed_with.name} needs a window, not a permutation")
        return (perm.images - 1).tolist()
    if not perm.closed_under(composed_with):
        raise ReflectionError(f"{perm} is not closed under {composed_with.name}")
    match composed_with:
        case Reflection.R:
            return (-perm.images - perm.offset).tolist()
        case Reflection.RHO:
            return (1 - perm.images - perm.offset).tolist()
    return (perm.images - perm.offset).tolist()

def cycle_counts(perm: Permutation | WindowPermutation,
                 composed_with: Reflection = Reflection.NONE) -> CycleCounts:
    """
    Cycle-length histogram of perm, or of r o perm (R) / rho o perm (RHO) for windows.
    """
    successor = _successors(perm, composed_with)
    size = len(successor)
    counts = [0] * (size + 1)
    visited = bytearray(size)
    for start in range(size):
        if visited[start]:
            continue
        length = 0
        j = start
        while not visited[j]:
            visited[j] = 1
            j = successor[j]
            length += 1
        counts[length] += 1
    return CycleCounts(np.asarray(counts, dtype=np.int64))

def fixed_points_reflected(window: WindowPermutation, mode: Reflection) -> int:
    """
    Number of trusted indices i with Sigma(i) = -i (R) or Sigma(i) = 1 - i (RHO).
    """
    if mode is Reflection.NONE:
        raise ReflectionError("fixed_points_reflected needs R or RHO")
    if not window.closed_under(mode):
        raise ReflectionError(f"{window} is not closed under {mode.name}")
    trusted = window.trusted_indices()
    images = window.images[window.margin:window.length - window.margin]
    target = -trusted if mode is Reflection.R else 1 - trusted
    return int(np.count_nonzero(images == target))

def arc_path(perm: Permutation) -> ArcPath:
    """kappa_t for t = 0..n, from kappa_t = kappa_{t-1} + [pi(t) > t] - [pi^{-1}(t) < t]."""
    positions = np.arange(1, perm.n + 1)
    opened = perm.images > positions
    closed = perm.inverse().images < positions
    steps = opened.astype(np.int64) - closed.astype(np.int64)
    return ArcPath(np.concatenate([[0], np.cumsum(steps)]))

def regeneration_flags(perm: Permutation) -> np.ndarray:
    """flags[j-1] is True when pi maps [j] onto itself"""
    return np.maximum.accumulate(perm.images) == np.arange(1, perm.n + 1)

def descents(perm: Permutation) -> int:
    """Number of i with pi(i) > pi(i+1)"""
    return int(np.count_nonzero(perm.images[:-1] > perm.images[1:]))
