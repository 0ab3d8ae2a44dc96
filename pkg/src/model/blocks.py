"""
model.blocks. Regeneration excursions of one-sided Mallows processes
"""
from dataclasses import dataclass

from model.permutation import CycleCounts, Permutation

@dataclass(frozen=True, eq=False)
class RegenBlock:
    """
    One excursion between consecutive regeneration times.

    Attributes:
        X: block length.
        cycle_counts: cycle histogram of the block's internal permutation.
        perm: the block's internal permutation, relabeled to [1..X].
    """
    X: int
    cycle_counts: CycleCounts
    perm: Permutation

    def __str__(self) -> str:
        return f"block X={self.X} {self.cycle_counts}"

@dataclass(frozen=True, eq=False)
class PairedRegenBlock:
    """
    One excursion between simultaneous regeneration times of two independent processes.

    Attributes:
        X: block length.
        composed_cycle_counts: cycle histogram of the composed block permutation, second after first.
        perm: the composed block permutation, relabeled to [1..X].
    """
    X: int
    composed_cycle_counts: CycleCounts
    perm: Permutation

    @property
    def cycle_counts(self) -> CycleCounts:
        """The histogram that renewal estimators read"""
        return self.composed_cycle_counts

    def __str__(self) -> str:
        return f"paired block X={self.X} {self.composed_cycle_counts}"
