"""
Law of the displacement Sigma(0) of the bi-infinite Mallows(Z, q) model,

    P[Sigma(0) = d] = (1-q)(q;q)_inf * sum_{r-l=d, r,l>=0} q^{rl+r+l} / ((q;q)_r (q;q)_l).

=== How the window is certified ===

1. The pmf is computed for d >= 0 and mirrored, so it is exactly symmetric.
2. For fixed d the inner sum runs over l with r = l + d. The ratio of consecutive terms,
   q^{2l+d+3} / ((1-q^{l+d+1})(1-q^{l+1})), decreases in l. Once it is below 1/2 the rest of
   the sum is bounded by a geometric series, and each d stops independently.
3. All terms are carried as logarithms, because (q;q)_inf underflows and the inner sums
   overflow when q is close to 1.
4. The full pmf sums to exactly 1, so the mass outside [-D..D] is 1 minus the compensated
   window sum. D doubles until that mass is at most tol.
"""
import logging
from logging import Logger
import math

import numpy as np

import constants
from errors import PrecisionError
from model.qparam import QParam
from model.series import DisplacementPmf
from qseries.pochhammer import check_tol, log1m_powers, log_q_pochhammer_inf

logger: Logger = logging.getLogger(__name__)

_LOG_HALF: float = math.log(0.5)

def displacement_pmf(q: QParam | float, tol: float = constants.DEFAULT_TOL) -> DisplacementPmf:
    """
    Truncated, certified displacement pmf for 0 < q < 1.
    """
    qp = QParam.of(q).require_subcritical("displacement_pmf")
    check_tol(tol)
    q_val = qp.q
    log_q = math.log(q_val)
    log_norm = math.log1p(-q_val) + log_q_pochhammer_inf(q_val, q_val, min(tol, 1e-10))
    inner_cap = _inner_term_cap(log_q, log_norm, tol)

    window = max(constants.INITIAL_DISPLACEMENT_WINDOW, math.ceil(math.log(tol / 4.0) / log_q))
    while True:
        half = _half_pmf(q_val, log_q, log_norm, window, inner_cap, tol)
        mass = math.fsum(half) * 2.0 - half[0]
        tail = 1.0 - mass
        logger.debug("displacement pmf q=%.6g D=%d inner<=%d tail=%.3g", q_val, window,
                     inner_cap, tail)
        if tail <= tol:
            break
        window *= 2
        if window > constants.MAX_DISPLACEMENT_WINDOW:
            raise PrecisionError(f"displacement pmf at q={q_val} needs a window beyond "
                                 f"{constants.MAX_DISPLACEMENT_WINDOW} for tol={tol}")

    probs = np.concatenate([half[:0:-1], half])
    return DisplacementPmf(q=qp, probs=probs, tail_bound=max(tail, 0.0))

def _inner_term_cap(log_q: float, log_norm: float, tol: float) -> int:
    """
    Largest l any inner sum needs. Every term satisfies
    (1-q)(q;q)_inf * term(l) <= q^{l^2} / (q;q)_inf, so once q^{l^2} <= tol * 1e-4 * (q;q)_inf
    the remaining terms are negligible for every d.
    """
    log_qq_inf = log_norm - math.log1p(-math.exp(log_q))
    threshold = (math.log(tol * 1e-4) + log_qq_inf) / log_q
    return math.ceil(math.sqrt(max(threshold, 0.0))) + 2

def _half_pmf(q: float, log_q: float, log_norm: float, window: int, inner_cap: int,
              tol: float) -> np.ndarray:
    """p(d) for d = 0..window"""
    lg1m = log1m_powers(q, window + inner_cap + 2)
    log_qfact = np.cumsum(lg1m.astype(np.longdouble))
    d = np.arange(window + 1)

    # term for l = 0 is q^d / (q;q)_d
    log_t = (d * log_q - log_qfact[d]).astype(float)
    log_s = log_t.copy()
    threshold = math.log(tol * 1e-3) - math.log(2 * window + 1) - log_norm
    hi = window + 1
    for l in range(inner_cap):
        dd = d[:hi]
        log_r = (2 * l + dd + 3) * log_q - lg1m[l + dd + 1] - lg1m[l + 1]
        log_next = log_t[:hi] + log_r
        log_s[:hi] = np.logaddexp(log_s[:hi], log_next)
        log_t[:hi] = log_next
        ratio = np.exp(np.minimum(log_r, _LOG_HALF))
        settled = (log_r < _LOG_HALF) & (log_next + log_r - np.log1p(-ratio) <= threshold)
        active = np.flatnonzero(~settled)
        if active.size == 0:
            break
        hi = int(active[-1]) + 1
    return np.exp(log_s + log_norm)
