"""
Stationary law nu of the infinite arc chain and the fixed-point density m1.
"""
import logging
from logging import Logger
import math

import numpy as np

import constants
from errors import DomainError, PrecisionError
from model.qparam import QParam
from model.series import StationaryArc
from qseries.pochhammer import check_tol

logger: Logger = logging.getLogger(__name__)

_INITIAL_STATES: int = 64

def nu_stationary(q: QParam | float, tol: float = constants.DEFAULT_TOL) -> StationaryArc:
    """
    nu_s proportional to prod_{i=1..s} q^{2i-1} / (1 - q^i)^2, truncated to a certified tail.

    The term ratio rho_s = q^{2s+1} / (1 - q^{s+1})^2 decreases in s, so once rho_S < 1/2
    the unnormalized mass past S is at most u_S rho_S / (1 - rho_S).
    """
    qp = QParam.of(q).require_subcritical("nu_stationary")
    check_tol(tol)
    q_val = qp.q
    log_q = math.log(q_val)
    states = _INITIAL_STATES
    while True:
        s = np.arange(states + 1, dtype=float)
        log_ratio = (2.0 * s + 1.0) * log_q - 2.0 * np.log1p(-np.power(q_val, s + 1.0))
        log_u = np.concatenate([[np.longdouble(0.0)],
                                np.cumsum(log_ratio[:-1].astype(np.longdouble))])
        peak = log_u.max()
        scaled = np.exp((log_u - peak).astype(float))
        partial = math.fsum(scaled)
        last_ratio = float(log_ratio[-1])
        if last_ratio < math.log(0.5):
            tail = float(scaled[-1]) * math.exp(last_ratio) / (-math.expm1(last_ratio)) / partial
            if tail <= tol * 1e-2:
                break
        states *= 2
        if states > constants.MAX_SERIES_TERMS:
            raise PrecisionError(f"stationary arc law at q={q_val} did not settle within "
                                 f"{constants.MAX_SERIES_TERMS} states")

    logger.debug("nu q=%.6g: %d states, tail<=%.3g", q_val, states + 1, tail)
    return StationaryArc(q=qp, weights=scaled / partial, tail_bound=tail)

def m1_exact(q: QParam | float, tol: float = constants.DEFAULT_TOL) -> float:
    """
    Asymptotic density of fixed points for 0 < q < 1: sum_s nu_s q^{2s} (1 - q).
    """
    qp = QParam.of(q).require_subcritical("m1_exact")
    nu = nu_stationary(qp, tol)
    s = np.arange(len(nu), dtype=float)
    return math.fsum(nu.weights * np.power(qp.q, 2.0 * s)) * (1.0 - qp.q)

def k_bound(q: QParam | float) -> float:
    """For q < 1/2, the normalizer of nu satisfies K_q <= (1-q)/(1-2q)."""
    qp = QParam.of(q)
    if not qp.q < 0.5:
        raise DomainError(f"k_bound holds for q < 1/2, got q={qp.q}")
    return (1.0 - qp.q) / (1.0 - 2.0 * qp.q)

def m1_lower_bound(q: QParam | float) -> float:
    """m1 >= nu_0 (1-q) >= 1 - 2q, informative for small q"""
    return 1.0 - 2.0 * QParam.of(q).q

def m1_upper_bound(q: QParam | float) -> float:
    """(1-q)^3 / (1-q+q^2) + q^2/(1+q)"""
    q_val = QParam.of(q).q
    return (1.0 - q_val) ** 3 / (1.0 - q_val + q_val ** 2) + q_val ** 2 / (1.0 + q_val)
