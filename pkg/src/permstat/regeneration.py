"""
Decomposition of Mallows processes into regeneration blocks.

A finite permutation and a lazily generated stream go through the same consumer: both
are a sequence of (value, is_regeneration) pairs, and a block closes at every flag.
"""
import logging
from logging import Logger
from typing import Iterable, Iterator

import numpy as np
import pandas as pd

from errors import DomainError
from model.blocks import PairedRegenBlock, RegenBlock
from model.permutation import Permutation
from permstat.statistics import cycle_counts, regeneration_flags

logger: Logger = logging.getLogger(__name__)

def _flagged(source: Permutation | Iterable[tuple[int, bool]],
             max_steps: int | None) -> Iterable[tuple[int, bool]]:
    if isinstance(source, Permutation):
        return zip(source.images.tolist(), regeneration_flags(source).tolist())
    if max_steps is None:
        raise DomainError("a stream source needs max_steps")
    return source

def _block_permutation(values: list[int], start: int) -> Permutation:
    return Permutation(np.asarray(values, dtype=np.int64) - start)

def regen_blocks(source: Permutation | Iterable[tuple[int, bool]],
                 max_steps: int | None = None) -> list[RegenBlock]:
    """
    Regeneration blocks of a permutation, or of a stream up to the first regeneration at
    or after `max_steps` steps, so that the block lengths always add up to the steps consumed.
    """
    blocks: list[RegenBlock] = []
    current: list[int] = []
    start = 0
    for value, regenerates in _flagged(source, max_steps):
        current.append(value)
        if regenerates:
            perm = _block_permutation(current, start)
            blocks.append(RegenBlock(X=perm.n, cycle_counts=cycle_counts(perm), perm=perm))
            start += perm.n
            current = []
            if max_steps is not None and start >= max_steps:
                break
    logger.debug("%d blocks over %d steps", len(blocks), start)
    return blocks

def paired_regen_blocks(stream_a: Iterator[tuple[int, bool]], stream_b: Iterator[tuple[int, bool]],
                        max_steps: int) -> list[PairedRegenBlock]:
    """
    Blocks between simultaneous regenerations of two independent streams, each carrying the
    cycle histogram of the composed block permutation (b after a).
    """
    blocks: list[PairedRegenBlock] = []
    values_a: list[int] = []
    values_b: list[int] = []
    start = 0
    for (value_a, regen_a), (value_b, regen_b) in zip(stream_a, stream_b):
        values_a.append(value_a)
        values_b.append(value_b)
        if regen_a and regen_b:
            first = _block_permutation(values_a, start)
            second = _block_permutation(values_b, start)
            composed = second.compose(first)
            blocks.append(PairedRegenBlock(X=composed.n,
                                           composed_cycle_counts=cycle_counts(composed),
                                           perm=composed))
            start += composed.n
            values_a = []
            values_b = []
            if start >= max_steps:
                break
    logger.debug("%d paired blocks over %d steps", len(blocks), start)
    return blocks

def blocks_to_frame(blocks: list[RegenBlock] | list[PairedRegenBlock], ell: int) -> pd.DataFrame:
    """Rows (block_index, X, c1, ..., c_ell)"""
    counts = np.array([block.cycle_counts.vector(ell) for block in blocks],
                      dtype=np.int64).reshape(len(blocks), ell)
    frame = pd.DataFrame(counts, columns=[f"c{i}" for i in range(1, ell + 1)])
    frame.insert(0, "X", [block.X for block in blocks])
    frame.insert(0, "block_index", np.arange(len(blocks)))
    return frame
