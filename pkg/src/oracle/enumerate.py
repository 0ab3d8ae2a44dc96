"""
Brute-force ground truth on S_n for small n: every permutation with its exact Mallows weight
q^inv / Z(n, q), and exact expectations, arc marginals and window displacements by summation.
"""
import functools
import itertools
import logging
from logging import Logger
import math
from pathlib import Path
from typing import Iterable

import numpy as np
import pandas as pd

import constants
from errors import DomainError
from model.permutation import Permutation
from model.qparam import QParam
from model.results import ExactPmf
from permstat.statistics import cycle_counts

logger: Logger = logging.getLogger(__name__)

@functools.lru_cache(maxsize=None)
def _all_permutations(n: int) -> np.ndarray:
    """Every permutation of 1..n, one row each, in lexicographic order"""
    return np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int64).reshape(-1, n)

@functools.lru_cache(maxsize=None)
def _inversion_table(n: int) -> np.ndarray:
    perms = _all_permutations(n)
    inv = np.zeros(len(perms), dtype=np.int64)
    for i, j in itertools.combinations(range(n), 2):
        inv += perms[:, i] > perms[:, j]
    return inv

@functools.lru_cache(maxsize=None)
def _cycle_table(n: int) -> np.ndarray:
    """Row k holds the cycle histogram (index 0..n) of permutation k"""
    return np.array([cycle_counts(Permutation(row)).counts for row in _all_permutations(n)],
                    dtype=np.int64)

def _check_size(n: int, cap: int = constants.ORACLE_MAX_N) -> None:
    if not 1 <= n <= cap:
        raise DomainError(f"exhaustive enumeration supports 1 <= n <= {cap}, got {n}")

def _probabilities(n: int, q: QParam | float) -> tuple[np.ndarray, float]:
    q_val = QParam.of(q).q
    weights = np.power(q_val, _inversion_table(n).astype(float))
    normalizer = math.fsum(weights)
    return weights / normalizer, normalizer

def enumerate_pmf(n: int, q: QParam | float) -> ExactPmf:
    """Exact Mallows(n, q) pmf over S_n, n <= 8."""
    _check_size(n)
    probs, normalizer = _probabilities(n, q)
    support = [Permutation(row) for row in _all_permutations(n)]
    return ExactPmf(n=n, q=QParam.of(q).q, support=support, probs=probs, normalizer=normalizer)

def exact_expected_cycles(n: int, q: QParam | float, i: int) -> float:
    """E C_i(Pi_n) under Mallows(n, q), n <= 8."""
    _check_size(n)
    if i < 1:
        raise DomainError(f"cycle length must be positive, got {i}")
    if i > n:
        return 0.0
    probs, _ = _probabilities(n, q)
    return math.fsum(probs * _cycle_table(n)[:, i])

def _arc_states(n: int, t: int) -> np.ndarray:
    """kappa_t of every permutation of S_n"""
    perms = _all_permutations(n)
    return (perms[:, :t] > t).sum(axis=1)

def exact_arc_marginal(n: int, q: QParam | float, t: int) -> dict[int, float]:
    """Law of kappa_t under Mallows(n, q), n <= 8."""
    _check_size(n)
    if not 0 <= t <= n:
        raise DomainError(f"arc time must satisfy 0 <= t <= n, got t={t}, n={n}")
    probs, _ = _probabilities(n, q)
    masses = np.bincount(_arc_states(n, t), weights=probs)
    return {k: float(p) for k, p in enumerate(masses) if p > 0.0}

def exact_arc_transition(n: int, q: QParam | float, t: int, k: int) -> dict[int, float]:
    """Conditional law of kappa_{t+1} given kappa_t = k, by enumeration."""
    _check_size(n)
    if not 0 <= t < n:
        raise DomainError(f"arc time must satisfy 0 <= t < n, got t={t}, n={n}")
    probs, _ = _probabilities(n, q)
    given = _arc_states(n, t) == k
    mass = math.fsum(probs[given])
    if mass == 0.0:
        raise DomainError(f"kappa_{t} = {k} has probability zero for n={n}")
    following = np.bincount(_arc_states(n, t + 1)[given], weights=probs[given])
    return {j: float(p) / mass for j, p in enumerate(following) if p > 0.0}

def exact_fixed_point_given_arc(n: int, q: QParam | float, t: int, k: int) -> float:
    """P[pi(t+1) = t+1 | kappa_t = k], by enumeration."""
    _check_size(n)
    if not 0 <= t < n:
        raise DomainError(f"arc time must satisfy 0 <= t < n, got t={t}, n={n}")
    probs, _ = _probabilities(n, q)
    given = _arc_states(n, t) == k
    mass = math.fsum(probs[given])
    if mass == 0.0:
        raise DomainError(f"kappa_{t} = {k} has probability zero for n={n}")
    fixed = given & (_all_permutations(n)[:, t] == t + 1)
    return math.fsum(probs[fixed]) / mass

def exact_window_displacement(n: int, q: QParam | float, d: int) -> float:
    """P[pi(c) = c + d] for the centre c of Mallows(n, q), n odd and at most 9."""
    _check_size(n, constants.ORACLE_WINDOW_MAX_N)
    if n % 2 == 0:
        raise DomainError(f"window displacement needs an odd size, got {n}")
    centre = (n + 1) // 2
    if abs(d) > centre - 1:
        return 0.0
    probs, _ = _probabilities(n, q)
    return math.fsum(probs[_all_permutations(n)[:, centre - 1] == centre + d])

def exact_inversion_identities(n: int) -> bool:
    """
    Check inv(pi^-1) = inv(pi), inv(r o pi) = C(n,2) - inv(pi) and inv(r o pi o r) = inv(pi)
    on all of S_n.
    """
    _check_size(n)
    perms = _all_permutations(n)
    inv = _inversion_table(n)
    index = {tuple(row): k for k, row in enumerate(perms.tolist())}
    inverse = np.argsort(perms, axis=1) + 1
    reversed_values = n + 1 - perms
    conjugated = reversed_values[:, ::-1]

    def lookup(rows: np.ndarray) -> np.ndarray:
        return inv[[index[tuple(row)] for row in rows.tolist()]]

    return bool((lookup(inverse) == inv).all()
                and (lookup(reversed_values) == math.comb(n, 2) - inv).all()
                and (lookup(conjugated) == inv).all())

def fixture_rows(cases: Iterable[tuple[int, float]]) -> pd.DataFrame:
    """Frozen oracle values (n, q, statistic, value) for the given (n, q) cases."""
    rows = []
    for n, q in cases:
        for i in range(1, n + 1):
            rows.append((n, q, f"expected_c{i}", exact_expected_cycles(n, q, i)))
        for t in range(n + 1):
            for k, p in exact_arc_marginal(n, q, t).items():
                rows.append((n, q, f"arc_t{t}_k{k}", p))
        if n % 2 == 1:
            for d in range(0, (n + 1) // 2):
                rows.append((n, q, f"window_d{d}", exact_window_displacement(n, q, d)))
    return pd.DataFrame(rows, columns=["n", "q", "statistic", "value"])

def export_fixtures(path: Path, cases: Iterable[tuple[int, float]]) -> Path:
    """Write the fixture CSV."""
    frame = fixture_rows(cases)
    frame.to_csv(path, index=False, float_format=constants.CSV_FLOAT_FORMAT)
    logger.info("wrote %d oracle fixture rows to %s", len(frame), path)
    return path
