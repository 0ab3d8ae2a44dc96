"""
Renewal-reward estimators over i.i.d. regeneration blocks.

m_i = E C_i / E X is estimated by the ratio of block sums, and mu_{2i} = E C_i / (2 E X)
over paired blocks, each of which covers 2X points of the finite permutation. The
standard error is the delta-method one: sd(Y - R s X) / (sqrt(B) s mean(X)) for B
blocks and scale s.
"""
import logging
from logging import Logger
import math
from typing import Sequence

import numpy as np

import constants
from errors import InsufficientDataError
from model.blocks import PairedRegenBlock, RegenBlock
from model.results import CovarianceEstimate, Estimate

logger: Logger = logging.getLogger(__name__)

def _lengths(blocks: Sequence[RegenBlock] | Sequence[PairedRegenBlock]) -> np.ndarray:
    return np.fromiter((block.X for block in blocks), dtype=float, count=len(blocks))

def _counts(blocks: Sequence[RegenBlock] | Sequence[PairedRegenBlock], i: int) -> np.ndarray:
    return np.fromiter((block.cycle_counts[i] for block in blocks), dtype=float, count=len(blocks))

def _scale(blocks: Sequence[RegenBlock] | Sequence[PairedRegenBlock]) -> float:
    return 2.0 if blocks and isinstance(blocks[0], PairedRegenBlock) else 1.0

def ratio_estimate(y: np.ndarray, x: np.ndarray, scale: float = 1.0,
                   min_blocks: int = constants.MIN_RATIO_BLOCKS) -> Estimate:
    """sum(y) / (scale sum(x)) with its delta-method standard error"""
    count = len(x)
    if count < max(min_blocks, 1):
        raise InsufficientDataError(f"ratio estimator needs at least {min_blocks} blocks, got {count}")
    x_mean = float(np.mean(x))
    ratio = math.fsum(y) / (scale * math.fsum(x))
    if count == 1:
        return Estimate(mean=ratio, std_error=0.0, replicates=1)
    residual = y - ratio * scale * x
    std_error = math.sqrt(float(np.var(residual, ddof=1)) / count) / (scale * x_mean)
    return Estimate(mean=ratio, std_error=std_error, replicates=count)

def estimate_mi(blocks: Sequence[RegenBlock], i: int,
                min_blocks: int = constants.MIN_RATIO_BLOCKS) -> Estimate:
    """Density m_i of i-cycles for 0 < q < 1"""
    return ratio_estimate(_counts(blocks, i), _lengths(blocks), 1.0, min_blocks)

def estimate_mu2i(paired_blocks: Sequence[PairedRegenBlock], i: int,
                  min_blocks: int = constants.MIN_RATIO_BLOCKS) -> Estimate:
    """Density mu_{2i} of 2i-cycles for q > 1, from blocks of the two sides at 1/q"""
    return ratio_estimate(_counts(paired_blocks, i), _lengths(paired_blocks), 2.0, min_blocks)

def estimate_covariance(blocks: Sequence[RegenBlock] | Sequence[PairedRegenBlock], ell: int,
                        min_blocks: int = constants.MIN_COVARIANCE_BLOCKS) -> CovarianceEstimate:
    """
    Plug-in covariance of U_i = (C_i - (E C_i / E X) X) / sqrt(s E X), i = 1..ell; with
    s = 1 this is (C_i E X - X E C_i) / (E X)^{3/2}. The result is the limiting covariance
    of the cycle counts of Pi_n scaled by 1/sqrt(n).
    """
    count = len(blocks)
    if count < max(min_blocks, 2):
        raise InsufficientDataError(f"covariance estimator needs at least {min_blocks} blocks, "
                                    f"got {count}")
    scale = _scale(blocks)
    x = _lengths(blocks)
    y = np.column_stack([_counts(blocks, i) for i in range(1, ell + 1)])
    x_mean = float(np.mean(x))
    y_mean = y.mean(axis=0)
    u = (y - np.outer(x, y_mean / x_mean)) / math.sqrt(scale * x_mean)
    matrix = np.atleast_2d(np.cov(u, rowvar=False, ddof=1))
    matrix = 0.5 * (matrix + matrix.T)
    logger.debug("covariance over %d blocks, diagonal %s", count, np.diag(matrix))
    return CovarianceEstimate(matrix=matrix, replicates=count)

def mean_gap_estimates(blocks: Sequence[RegenBlock],
                       gaps: np.ndarray) -> tuple[Estimate, Estimate]:
    """E X_1 from a stream's block lengths and from independently drawn M-chain gaps"""
    return Estimate.from_samples(_lengths(blocks)), Estimate.from_samples(np.asarray(gaps, dtype=float))
