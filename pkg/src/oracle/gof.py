"""
Goodness-of-fit utilities: Pearson chi-square against an exact pmf, two-sample chi-square
for equality of laws, and total variation distance.
"""
import logging
from logging import Logger
from collections import Counter
from typing import Hashable, Iterable, Mapping

import numpy as np
from scipy import stats

import constants
from errors import InsufficientDataError
from model.permutation import Permutation
from model.results import ExactPmf, GofReport

logger: Logger = logging.getLogger(__name__)

def empirical_counts(samples: Iterable[Hashable | Permutation]) -> Counter:
    """Cell counts, keyed by one-line tuples for permutations"""
    return Counter(sample.key() if isinstance(sample, Permutation) else sample
                   for sample in samples)

def _merge_groups(expected: np.ndarray, minimum: float) -> list[list[int]]:
    """
    Group cell indices so every group's expected count reaches `minimum`, pooling the
    smallest cells first; a short final pool joins the last full group.
    """
    order = np.argsort(expected, kind="stable")
    groups: list[list[int]] = []
    pending: list[int] = []
    pending_mass = 0.0
    for cell in order.tolist():
        pending.append(cell)
        pending_mass += expected[cell]
        if pending_mass >= minimum:
            groups.append(pending)
            pending = []
            pending_mass = 0.0
    if pending:
        if groups:
            groups[-1].extend(pending)
        else:
            groups.append(pending)
    return groups

def chi_square_gof(observed: Mapping[Hashable, float] | np.ndarray,
                   expected: ExactPmf | Mapping[Hashable, float] | np.ndarray,
                   min_total: int = constants.MIN_GOF_OBSERVATIONS) -> GofReport:
    """
    Pearson chi-square of observed counts against an expected pmf, with cells of expected
    count below 5 merged and (cells - 1) degrees of freedom.
    """
    if isinstance(expected, ExactPmf):
        expected = expected.as_map()
    if isinstance(expected, Mapping):
        if not isinstance(observed, Mapping):
            raise TypeError("observed counts must be keyed like the expected pmf")
        keys = list(expected.keys())
        stray = sum(count for key, count in observed.items() if key not in expected and count > 0)
        obs = np.array([observed.get(key, 0) for key in keys], dtype=float)
        probs = np.array([expected[key] for key in keys], dtype=float)
    else:
        stray = 0
        obs = np.asarray(observed, dtype=float)
        probs = np.asarray(expected, dtype=float)
        if obs.shape != probs.shape:
            raise ValueError(f"observed {obs.shape} and expected {probs.shape} differ in shape")

    total = float(obs.sum()) + stray
    if total <= 0:
        raise InsufficientDataError("empty observation")
    if total < min_total:
        raise InsufficientDataError(f"goodness of fit needs at least {min_total} observations, "
                                    f"got {total:.0f}")
    if stray > 0:
        logger.debug("%d observations fall outside the expected support", stray)
        return GofReport(statistic=float("inf"), dof=max(len(obs) - 1, 1), p_value=0.0,
                         cells_merged=0)

    keep = probs > 0.0
    if (obs[~keep] > 0).any():
        return GofReport(statistic=float("inf"), dof=max(int(keep.sum()) - 1, 1), p_value=0.0,
                         cells_merged=0)
    obs, probs = obs[keep], probs[keep] / probs[keep].sum()
    exp_counts = probs * total
    groups = _merge_groups(exp_counts, constants.GOF_MIN_EXPECTED)
    grouped_obs = np.array([obs[g].sum() for g in groups])
    grouped_exp = np.array([exp_counts[g].sum() for g in groups])
    merged = sum(len(g) for g in groups if len(g) > 1)
    statistic = float(np.sum((grouped_obs - grouped_exp) ** 2 / grouped_exp))
    dof = len(groups) - 1
    p_value = float(stats.chi2.sf(statistic, dof)) if dof > 0 else 1.0
    return GofReport(statistic=statistic, dof=dof, p_value=p_value, cells_merged=merged)

def two_sample_chi_square(counts_a: Mapping[Hashable, float],
                          counts_b: Mapping[Hashable, float]) -> GofReport:
    """
    Chi-square test that two samples share one law, as a 2 x K contingency table with
    sparse cells pooled until the pooled column holds at least 10 observations.
    """
    keys = sorted(set(counts_a) | set(counts_b), key=repr)
    table = np.array([[counts_a.get(key, 0) for key in keys],
                      [counts_b.get(key, 0) for key in keys]], dtype=float)
    if table.sum(axis=1).min() <= 0:
        raise InsufficientDataError("both samples must be nonempty")
    column_totals = table.sum(axis=0)
    groups = _merge_groups(column_totals, 2.0 * constants.GOF_MIN_EXPECTED)
    pooled = np.column_stack([table[:, g].sum(axis=1) for g in groups])
    merged = sum(len(g) for g in groups if len(g) > 1)
    if pooled.shape[1] < 2:
        return GofReport(statistic=0.0, dof=0, p_value=1.0, cells_merged=merged)
    statistic, p_value, dof, _ = stats.chi2_contingency(pooled, correction=False)
    return GofReport(statistic=float(statistic), dof=int(dof), p_value=float(p_value),
                     cells_merged=merged)

def total_variation(first: Mapping[Hashable, float], second: Mapping[Hashable, float]) -> float:
    """Half the L1 distance between two pmfs"""
    keys = set(first) | set(second)
    return 0.5 * sum(abs(first.get(key, 0.0) - second.get(key, 0.0)) for key in keys)

def normalize_counts(counts: Mapping[Hashable, float]) -> dict[Hashable, float]:
    """Counts to an empirical pmf"""
    total = float(sum(counts.values()))
    if total <= 0:
        raise InsufficientDataError("empty observation")
    return {key: value / total for key, value in counts.items()}
