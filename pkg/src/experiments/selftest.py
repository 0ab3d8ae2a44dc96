"""
The oracle suite: samplers against exhaustive enumeration, exact identities on S_n,
cross-checks between the series evaluations, the asymptotic bands and the q = 1 control.
Each check is one row (check, value, target, pass).
"""
import logging
from logging import Logger
import math
from typing import Callable

import numpy as np
import pandas as pd

import constants
from context import ExperimentConfig
from experiments.runner import auxiliary_stream_id, log_verdict, run_replicates
from model.permutation import Permutation
from model.results import Estimate
from oracle.enumerate import enumerate_pmf, exact_expected_cycles, exact_inversion_identities
from oracle.gof import chi_square_gof, empirical_counts
from permstat.additive import fixed_point_count
from qseries.arc_chain import arc_transition_finite, arc_transition_infinite
from qseries.displacement import displacement_pmf
from qseries.limits import ce_co_exact
from qseries.pochhammer import z_partition
from qseries.stationary import m1_exact, m1_lower_bound, m1_upper_bound
from sampler.finite import sample_mallows_finite, sample_mallows_two_sided
from sampler.rng import RngStream

logger: Logger = logging.getLogger(__name__)

SELFTEST_COLUMNS: list[str] = ["check", "value", "target", "pass"]
GOF_SIZE: int = 5
CONTROL_SIZE: int = 100

Sampler = Callable[[int, float, RngStream], Permutation]

def _gof_row(name: str, sampler: Sampler, q: float, draws: int, rng: RngStream) -> dict:
    counts = empirical_counts(sampler(GOF_SIZE, q, rng) for _ in range(draws))
    report = chi_square_gof(counts, enumerate_pmf(GOF_SIZE, q))
    logger.debug("%s: %s", name, report)
    return {"check": name, "value": report.p_value, "target": constants.GOF_ALPHA,
            "pass": report.passes(constants.GOF_ALPHA)}

def _max_gap_row(name: str, gaps: list[float], limit: float) -> dict:
    worst = max(gaps)
    return {"check": name, "value": worst, "target": limit, "pass": worst <= limit}

def control_fixed_points(q: float, n: int, rng: RngStream) -> float:
    """C_1 of one Mallows(n, q) draw"""
    return fixed_point_count(sample_mallows_finite(n, q, rng))

def _sampler_checks(config: ExperimentConfig) -> list[dict]:
    draws = max(config.replicates, constants.MIN_GOF_OBSERVATIONS)
    return [
        _gof_row("gof one-sided n=5 q=0.7", sample_mallows_finite, 0.7, draws,
                 RngStream(config.seed, auxiliary_stream_id(0, 0))),
        _gof_row("gof two-sided n=5 q=0.7", sample_mallows_two_sided, 0.7, draws,
                 RngStream(config.seed, auxiliary_stream_id(0, 1))),
        _gof_row("gof reversed n=5 q=2", sample_mallows_finite, 2.0, draws,
                 RngStream(config.seed, auxiliary_stream_id(0, 2))),
    ]

def _oracle_checks() -> list[dict]:
    normalizer_gaps = [abs(enumerate_pmf(n, q).normalizer / z_partition(n, q) - 1.0)
                       for n in range(1, constants.ORACLE_MAX_N + 1)
                       for q in (0.2, 0.5, 0.7, 0.9, 1.0, 2.0)]
    uniform_gaps = [abs(exact_expected_cycles(n, 1.0, i) - 1.0 / i)
                    for n in range(1, constants.ORACLE_MAX_N + 1) for i in range(1, n + 1)]
    identities = exact_inversion_identities(4)
    return [
        _max_gap_row("normalizer matches z_partition", normalizer_gaps, 1e-10),
        _max_gap_row("E C_i = 1/i at q=1", uniform_gaps, 1e-12),
        {"check": "inversion identities on S_4", "value": float(identities), "target": 1.0,
         "pass": identities},
    ]

def _series_checks(tol: float) -> list[dict]:
    sub_grid = [round(0.1 * i, 1) for i in range(1, 10)]
    super_grid = (1.1, 2.0, 5.0, 25.0)
    m1_gaps = [abs(m1_exact(q, tol) - displacement_pmf(q, tol)[0]) for q in sub_grid]
    ratio_gaps = []
    for q in sub_grid:
        probs = displacement_pmf(q, tol).probs
        centre = len(probs) // 2
        # the ratio sandwich is read where both probabilities are far above the tail bound
        usable = probs[centre:][probs[centre:] > 1e3 * tol]
        ratios = usable[1:] / usable[:-1]
        ratio_gaps.append(max(0.0, float(np.max(q - ratios, initial=0.0)),
                              float(np.max(ratios - 1.0 / q, initial=0.0))))
    ceco_sum_gaps, ceco_band_gaps = [], []
    for q in super_grid:
        c_e, c_o = ce_co_exact(q, tol)
        ceco_sum_gaps.append(abs(c_e + c_o - 1.0))
        low, high = 1.0 / (1.0 + q), q / (1.0 + q)
        ceco_band_gaps.append(max(0.0, low - min(c_e, c_o), max(c_e, c_o) - high))
    kernel_gaps = [abs(math.fsum(arc_transition_finite(k, t, 50, 0.5).values()) - 1.0)
                   for t in range(50) for k in range(min(t, 50 - t) + 1)]
    kernel_gaps += [abs(math.fsum(arc_transition_infinite(k, 0.5).values()) - 1.0) for k in range(50)]
    small_q = 0.01
    m1_small = m1_exact(small_q, tol)
    near_one = 4.0 * m1_exact(0.999, tol) / (1.0 - 0.999)
    large_q = 1000.0
    _, c_o_large = ce_co_exact(large_q, tol)
    return [
        _max_gap_row("m1_exact = displacement p(0)", m1_gaps, 1e-8),
        _max_gap_row("q <= p(d+1)/p(d) <= 1/q", ratio_gaps, 1e-9),
        _max_gap_row("c_e + c_o = 1", ceco_sum_gaps, 1e-8),
        _max_gap_row("1/(1+q) <= c_e, c_o <= q/(1+q)", ceco_band_gaps, 1e-12),
        _max_gap_row("arc kernel rows sum to 1", kernel_gaps, 1e-12),
        {"check": "m1 bounds at q=0.01", "value": m1_small, "target": m1_lower_bound(small_q),
         "pass": m1_lower_bound(small_q) <= m1_small <= m1_upper_bound(small_q)},
        {"check": "4 m1/(1-q) at q=0.999", "value": near_one, "target": 1.0,
         "pass": 0.95 <= near_one <= 1.05},
        {"check": "c_o = 1 - 2/q at q=1000", "value": c_o_large, "target": 1.0 - 2.0 / large_q,
         "pass": abs(c_o_large - (1.0 - 2.0 / large_q)) <= 10.0 / large_q ** 2},
    ]

def _control_check(config: ExperimentConfig) -> dict:
    estimate = Estimate.from_samples(run_replicates(control_fixed_points, config, 0, 1.0,
                                                    n=CONTROL_SIZE)[:, 0])
    return {"check": f"mean C_1 = 1 at n={CONTROL_SIZE} q=1", "value": estimate.mean,
            "target": 1.0, "pass": estimate.within(1.0, constants.SE_BAND)}

def run_selftest(config: ExperimentConfig) -> pd.DataFrame:
    """Run every check; the frame holds one row per check."""
    rows = _oracle_checks() + _series_checks(config.tol) + _sampler_checks(config)
    rows.append(_control_check(config))
    for row in rows:
        log_verdict(logger, config, float("nan"), bool(row["pass"]),
                    f"{row['check']}: {row['value']:.6g} (target {row['target']:.6g})")
    return pd.DataFrame(rows, columns=SELFTEST_COLUMNS)
