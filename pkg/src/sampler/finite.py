"""
Exact samplers for Mallows(n, q) and windows of the bi-infinite model.

The one-sided sampler fixes pi(1), pi(2), ... in turn: pi(i) is the Z_i-th smallest value
not yet used, with Z_i ~ TGeo(n+1-i, 1-q). The two-sided sampler alternates between the
smallest free position on the left, taking a Z-th smallest value, and the largest free
position on the right, taking a Z-th largest value; every Z is truncated at the number of
values still free. q > 1 is realized as r_n o pi with pi ~ Mallows(n, 1/q).
"""
import logging
from logging import Logger
import math

import numpy as np

from errors import DomainError
from model.order_statistic import OrderStatisticTree
from model.permutation import Permutation, WindowPermutation
from model.qparam import QParam, Regime
from sampler.geometric import trunc_geom_inverse
from sampler.rng import RngStream

logger: Logger = logging.getLogger(__name__)

def _ranks(n: int, qp: QParam, rng: RngStream) -> list[int]:
    """Z_1..Z_n with Z_i ~ TGeo(n+1-i, 1-q) for q <= 1"""
    sizes = np.arange(n, 0, -1)
    uniforms = rng.uniform(n)
    if qp.regime is Regime.CRITICAL:
        return trunc_geom_inverse(uniforms, sizes, 0.0).tolist()
    return trunc_geom_inverse(uniforms, sizes, 1.0 - qp.q, log_keep=math.log(qp.q)).tolist()

def sample_mallows_finite(n: int, q: QParam | float, rng: RngStream) -> Permutation:
    """One Mallows(n, q) permutation, any q > 0."""
    if n < 1:
        raise DomainError(f"sample_mallows_finite requires n >= 1, got {n}")
    qp = QParam.of(q)
    if qp.regime is Regime.SUPER_CRITICAL:
        return reverse_compose(sample_mallows_finite(n, qp.inverse(), rng))
    tree = OrderStatisticTree(n)
    pop = tree.pop_kth
    images = [pop(z) for z in _ranks(n, qp, rng)]
    return Permutation(np.asarray(images, dtype=np.int64))

def reverse_compose(perm: Permutation) -> Permutation:
    """r_n o pi, i.e. i -> n + 1 - pi(i)"""
    return Permutation(perm.n + 1 - perm.images)

def sample_mallows_two_sided(n: int, q: QParam | float, rng: RngStream) -> Permutation:
    """One Mallows(n, q) permutation for 0 < q < 1, filled from both ends."""
    if n < 1:
        raise DomainError(f"sample_mallows_two_sided requires n >= 1, got {n}")
    qp = QParam.of(q).require_subcritical("sample_mallows_two_sided")
    ranks = _ranks(n, qp, rng)
    tree = OrderStatisticTree(n)
    images = np.empty(n, dtype=np.int64)
    left, right, draw = 0, n - 1, 0
    while left < right:
        images[left] = tree.pop_kth(ranks[draw])
        images[right] = tree.pop_kth_largest(ranks[draw + 1])
        left += 1
        right -= 1
        draw += 2
    if left == right:
        images[left] = tree.pop_kth(1)
    return Permutation(images)

def window_margin(W: int, q: QParam | float) -> int:
    """
    Trust margin B = ceil(2 log(2W+1) / log(1/q)): a given index is displaced by more
    than B with probability O((2W+1)^-2).
    """
    q_val = QParam.of(q).require_subcritical("window_margin").q
    if W <= 0:
        return 0
    return math.ceil(2.0 * math.log(2 * W + 1) / -math.log(q_val))

def sample_mallows_window(W: int, q: QParam | float, rng: RngStream,
                          even: bool = False) -> WindowPermutation:
    """
    Mallows(2W+1, q) relabeled to [-W..W], or Mallows(2W, q) relabeled to [-W+1..W] when
    `even` is set, standing in for the bi-infinite model near 0.
    """
    qp = QParam.of(q).require_subcritical("sample_mallows_window")
    if W < 0 or (even and W < 1):
        raise DomainError(f"window half-width {W} too small{' for an even window' if even else ''}")
    length = 2 * W if even else 2 * W + 1
    offset = -W + 1 if even else -W
    perm = sample_mallows_finite(length, qp, rng)
    return WindowPermutation(offset=offset, images=perm.images + (offset - 1),
                             margin=window_margin(W, qp))
