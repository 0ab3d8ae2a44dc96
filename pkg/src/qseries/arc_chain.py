"""
The arc chain kappa_t = |{i <= t : pi(i) > t}| of Mallows(n, q) for 0 < q < 1.

For finite n the chain is a time-inhomogeneous birth-death chain. With a = q^k and
b = q^{n-t} its kernel from kappa_t = k is

    down (k-1): (1-a)^2 / (1-b)^2
    stay (k):   (a-b)(2-a-qa) / (1-b)^2
    up   (k+1): (a-b)(qa-b) / (1-b)^2

and P[pi(t+1) = t+1 | kappa_t = k] = (a - qa)(a - b) / (1-b)^2. As n - t grows the
kernel tends to the homogeneous one of the infinite chain.
"""
import logging
from logging import Logger
import math

import numpy as np

from errors import DomainError
from model.qparam import QParam

logger: Logger = logging.getLogger(__name__)

ARC_STATE_CAP: int = 2048

def _validate(k: int, t: int, n: int) -> None:
    if n < 1 or not 0 <= t < n:
        raise DomainError(f"arc chain time must satisfy 0 <= t < n, got t={t}, n={n}")
    if not 0 <= k <= min(t, n - t):
        raise DomainError(f"arc state k={k} outside 0..min(t, n-t) = 0..{min(t, n - t)}")

def _one_minus_power(log_q: float, m: int | np.ndarray) -> float | np.ndarray:
    """1 - q^m computed without cancellation"""
    return -np.expm1(m * log_q)

def arc_transition_finite(k: int, t: int, n: int, q: QParam | float) -> dict[int, float]:
    """
    Law of kappa_{t+1} given kappa_t = k for Mallows(n, q). States outside
    0..min(t+1, n-t-1) carry no mass and are omitted.
    """
    q_val = QParam.of(q).require_subcritical("arc_transition_finite").q
    _validate(k, t, n)
    log_q = math.log(q_val)
    a = q_val ** k
    one_minus_b = float(_one_minus_power(log_q, n - t))
    a_minus_b = a * float(_one_minus_power(log_q, n - t - k))
    qa_minus_b = q_val * a * float(_one_minus_power(log_q, n - t - k - 1))
    scale = one_minus_b * one_minus_b
    probs = {
        k - 1: (1.0 - a) ** 2 / scale,
        k: a_minus_b * (2.0 - a - q_val * a) / scale,
        k + 1: a_minus_b * qa_minus_b / scale,
    }
    top = min(t + 1, n - t - 1)
    return {j: p for j, p in probs.items() if 0 <= j <= top}

def arc_transition_infinite(k: int, q: QParam | float) -> dict[int, float]:
    """Kernel of the homogeneous infinite arc chain from state k."""
    q_val = QParam.of(q).require_subcritical("arc_transition_infinite").q
    if k < 0:
        raise DomainError(f"arc state must be nonnegative, got {k}")
    a = q_val ** k
    probs = {
        k - 1: (1.0 - a) ** 2,
        k: 2.0 * a - a * a - q_val * a * a,
        k + 1: q_val * a * a,
    }
    return {j: p for j, p in probs.items() if j >= 0}

def fixed_point_prob_given_arc(k: int, t: int, n: int, q: QParam | float) -> float:
    """P[pi(t+1) = t+1 | kappa_t = k] for Mallows(n, q)."""
    q_val = QParam.of(q).require_subcritical("fixed_point_prob_given_arc").q
    _validate(k, t, n)
    log_q = math.log(q_val)
    a = q_val ** k
    one_minus_b = float(_one_minus_power(log_q, n - t))
    a_minus_b = a * float(_one_minus_power(log_q, n - t - k))
    return a * (1.0 - q_val) * a_minus_b / (one_minus_b * one_minus_b)

def _kernel_arrays(states: np.ndarray, t: int, n: int, q: float,
                   log_q: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized (down, stay, up, fixed-point) columns over states, zero where k > n - t."""
    feasible = states <= n - t
    gap = np.where(feasible, n - t - states, 0)
    a = np.power(q, states.astype(float))
    one_minus_b = float(_one_minus_power(log_q, n - t))
    scale = one_minus_b * one_minus_b
    a_minus_b = a * _one_minus_power(log_q, gap)
    qa_minus_b = q * a * np.where(gap >= 1, _one_minus_power(log_q, np.maximum(gap - 1, 0)), 0.0)
    down = np.where(feasible, (1.0 - a) ** 2 / scale, 0.0)
    stay = np.where(feasible, a_minus_b * (2.0 - a - q * a) / scale, 0.0)
    up = np.where(feasible, a_minus_b * qa_minus_b / scale, 0.0)
    fixed = np.where(feasible, a * (1.0 - q) * a_minus_b / scale, 0.0)
    return down, stay, up, fixed

def _propagate(n: int, q: float, until: int) -> tuple[np.ndarray, float]:
    """
    Marginal of kappa_until, stepping the exact kernel from kappa_0 = 0, together with
    the expected number of fixed points among positions 1..until.
    """
    log_q = math.log(q)
    width = min(n // 2 + 2, ARC_STATE_CAP)
    states = np.arange(width)
    marginal = np.zeros(width)
    marginal[0] = 1.0
    fixed_total = 0.0
    for t in range(until):
        down, stay, up, fixed = _kernel_arrays(states, t, n, q, log_q)
        fixed_total += float(np.dot(marginal, fixed))
        step = marginal * stay
        step[:-1] += (marginal * down)[1:]
        step[1:] += (marginal * up)[:-1]
        marginal = step
    return marginal, fixed_total

def arc_marginal(n: int, q: QParam | float, t: int) -> dict[int, float]:
    """Law of kappa_t under Mallows(n, q), by stepping the exact kernel from t = 0."""
    q_val = QParam.of(q).require_subcritical("arc_marginal").q
    if n < 1 or not 0 <= t <= n:
        raise DomainError(f"arc marginal needs 0 <= t <= n, got t={t}, n={n}")
    marginal, _ = _propagate(n, q_val, t)
    return {k: float(p) for k, p in enumerate(marginal) if p > 0.0}

def expected_fixed_points(n: int, q: QParam | float) -> float:
    """
    Exact E C_1(Pi_n) for Mallows(n, q) with 0 < q < 1, summing the fixed-point
    probability of position t+1 against the propagated law of kappa_t.
    """
    q_val = QParam.of(q).require_subcritical("expected_fixed_points").q
    if n < 1:
        raise DomainError(f"expected_fixed_points requires n >= 1, got {n}")
    _, total = _propagate(n, q_val, n)
    logger.debug("E C1 for n=%d q=%.6g is %.12g", n, q_val, total)
    return total
