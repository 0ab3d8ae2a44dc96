"""
Partition function and q-Pochhammer symbols.
"""
import logging
from logging import Logger
import math

import numpy as np

import constants
from errors import DomainError, PrecisionError, RangeOverflowError
from model.qparam import QParam, Regime

logger: Logger = logging.getLogger(__name__)

def check_tol(tol: float) -> float:
    """Validate a series tolerance."""
    if not 0.0 < tol < 1.0:
        raise DomainError(f"tolerance must lie in (0, 1), got {tol}")
    if tol < constants.MIN_TOL:
        raise PrecisionError(f"tolerance {tol} is below what double precision can certify "
                             f"({constants.MIN_TOL})")
    return tol

def z_partition(n: int, q: QParam | float) -> float:
    """
    Z(n, q) = sum over S_n of q^inv = prod_{i=1..n} (1 - q^i)/(1 - q), and n! at q = 1.
    """
    if n < 1:
        raise DomainError(f"z_partition requires n >= 1, got {n}")
    qp = QParam.of(q)
    if qp.regime is Regime.CRITICAL:
        try:
            return float(math.factorial(n))
        except OverflowError as e:
            raise RangeOverflowError(f"{n}! exceeds the floating range") from e

    log_q = math.log(qp.q)
    denominator = math.expm1(log_q)
    value = 1.0
    try:
        for i in range(2, n + 1):
            value *= math.expm1(i * log_q) / denominator
            if not math.isfinite(value):
                raise RangeOverflowError(f"Z({n}, {qp.q}) exceeds the floating range")
    except OverflowError as e:
        raise RangeOverflowError(f"Z({n}, {qp.q}) exceeds the floating range") from e
    return value

def q_pochhammer(a: float, q: QParam | float, n: int | float = math.inf,
                 tol: float = constants.DEFAULT_TOL) -> float:
    """
    (a; q)_n = prod_{i=1..n} (1 - a q^{i-1}); n may be math.inf for 0 < q < 1.

    The infinite product stops once the next factor is within tol/100 of 1 and the
    logarithm of the remaining product is bounded by tol/100 through
    sum_j |a| q^j / (1 - |a| q^j) <= |a| q^N / ((1 - q)(1 - |a| q^N)).
    """
    qp = QParam.of(q)
    if n != math.inf:
        if n < 0 or int(n) != n:
            raise DomainError(f"q_pochhammer length must be a nonnegative integer or inf, got {n}")
        try:
            factors = [1.0 - a * qp.q ** i for i in range(int(n))]
        except OverflowError as e:
            raise RangeOverflowError(f"({a}; {qp.q})_{n} exceeds the floating range") from e
        value = math.prod(factors)
        if not math.isfinite(value):
            raise RangeOverflowError(f"({a}; {qp.q})_{n} exceeds the floating range")
        return value

    qp.require_subcritical("q_pochhammer with n = inf")
    check_tol(tol)
    value, _ = _pochhammer_inf(a, qp.q, tol)
    return value

def _factor_count(a: float, q: float, tol: float) -> int:
    """Number of factors after which the remaining infinite product is within tol/100 of 1."""
    if a == 0.0:
        return 0
    target = min(tol * 1e-2, 0.25)
    # |a| q^N <= target (1 - q) / (1 + target) gives the bound above <= target
    bound = target * (1.0 - q) / (1.0 + target) / abs(a)
    if bound >= 1.0:
        return 1
    count = max(1, math.ceil(math.log(bound) / math.log(q)))
    if count > constants.MAX_SERIES_TERMS:
        raise PrecisionError(f"(a; q)_inf at a={a}, q={q} needs {count} factors")
    return count

def _pochhammer_inf(a: float, q: float, tol: float) -> tuple[float, float]:
    count = _factor_count(a, q, tol)
    if count == 0:
        return 1.0, 0.0
    terms = a * np.power(q, np.arange(count, dtype=float))
    remainder = abs(a) * q ** count
    log_bound = remainder / ((1.0 - q) * (1.0 - remainder))
    if (terms < 1.0).all():
        log_value = math.fsum(np.log1p(-terms))
        value = math.exp(log_value)
    else:
        value = float(np.prod(1.0 - terms))
    logger.debug("(%.6g; %.6g)_inf: %d factors, log remainder <= %.3g", a, q, count, log_bound)
    return value, abs(value) * math.expm1(log_bound)

def log_q_pochhammer_inf(a: float, q: QParam | float, tol: float = constants.DEFAULT_TOL) -> float:
    """
    log (a; q)_inf for a < 1 and 0 < q < 1, summed in log space so that products far
    below the floating range stay representable.
    """
    qp = QParam.of(q).require_subcritical("log_q_pochhammer_inf")
    if a >= 1.0:
        raise DomainError(f"log_q_pochhammer_inf requires a < 1, got {a}")
    check_tol(tol)
    count = _factor_count(a, qp.q, tol)
    if count == 0:
        return 0.0
    terms = a * np.power(qp.q, np.arange(count, dtype=float))
    return math.fsum(np.log1p(-terms))

def log1m_powers(q: float, count: int) -> np.ndarray:
    """Array whose entry k is log(1 - q^k) for k = 1..count; entry 0 is 0."""
    out = np.zeros(count + 1, dtype=float)
    if count > 0:
        out[1:] = np.log1p(-np.power(q, np.arange(1, count + 1, dtype=float)))
    return out

def log_q_factorials(q: float, count: int) -> np.ndarray:
    """Array whose entry k is log (q; q)_k for k = 0..count, accumulated in extended precision."""
    return np.cumsum(log1m_powers(q, count).astype(np.longdouble))
