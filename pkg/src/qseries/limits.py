"""
Limiting cycle constants of Mallows(n, q) for q > 1 and the exact-constants table.
"""
import logging
from logging import Logger
import math
from typing import Iterable

import numpy as np
import pandas as pd

import constants
from errors import DomainError
from model.qparam import QParam, Regime
from model.series import ExactConstants
from qseries.displacement import displacement_pmf
from qseries.stationary import m1_exact

logger: Logger = logging.getLogger(__name__)

def mu2_exact(q: QParam | float, tol: float = constants.DEFAULT_TOL) -> float:
    """
    Density of 2-cycles for q > 1: half the collision probability of two independent
    displacements of Mallows(Z, 1/q).
    """
    qp = QParam.of(q).require_supercritical("mu2_exact")
    pmf = displacement_pmf(qp.inverse(), tol)
    return 0.5 * math.fsum(np.square(pmf.probs))

def ce_co_exact(q: QParam | float, tol: float = constants.DEFAULT_TOL) -> tuple[float, float]:
    """
    Limiting mean fixed-point counts (c_e, c_o) for q > 1 along even and odd n:
    c_e = P[Sigma(0) odd] and c_o = P[Sigma(0) even] under Mallows(Z, 1/q).
    """
    qp = QParam.of(q).require_supercritical("ce_co_exact")
    pmf = displacement_pmf(qp.inverse(), tol)
    return pmf.odd_mass(), pmf.even_mass()

def exact_constants(q: QParam | float, tol: float = constants.DEFAULT_TOL) -> ExactConstants:
    """All constants defined for q; the others are NaN."""
    qp = QParam.of(q)
    match qp.regime:
        case Regime.SUB_CRITICAL:
            return ExactConstants(q=qp.q, m1=m1_exact(qp, tol), tol=tol)
        case Regime.SUPER_CRITICAL:
            pmf = displacement_pmf(qp.inverse(), tol)
            return ExactConstants(q=qp.q,
                                  mu2=0.5 * math.fsum(np.square(pmf.probs)),
                                  c_e=pmf.odd_mass(),
                                  c_o=pmf.even_mass(),
                                  tol=tol)
    # the constants are undefined at q = 1; the table keeps the row with NaNs
    return ExactConstants(q=qp.q, tol=tol)

def constants_table(q_grid: Iterable[float], tol: float = constants.DEFAULT_TOL) -> pd.DataFrame:
    """Rows (q, m1, mu2, c_e, c_o, tol) for every q of the grid."""
    rows = []
    for q in q_grid:
        row = exact_constants(q, tol)
        logger.debug("constants %s", row)
        rows.append(row.as_row())
    return pd.DataFrame(rows, columns=["q", "m1", "mu2", "c_e", "c_o", "tol"])

def parity_tail_rate(q: QParam | float, m: int) -> float:
    """
    Reference order q^{C(m,2)} (1-q)^m of P[C_1 >= m] for the reflection that favours the
    parity of m
    """
    q_val = QParam.of(q).require_subcritical("parity_tail_rate").q
    if m < 1:
        raise DomainError(f"tail level must be positive, got {m}")
    return q_val ** math.comb(m, 2) * (1.0 - q_val) ** m
