"""
Property checks of the joint normal limit of cycle counts.

For q < 1 the counts C_i(Pi_n), i <= ell, are centered by m_i n and scaled by sqrt(n); for
q > 1 the same is done with C_{2i}(Pi_n) and mu_{2i}. The centering constants and the
limiting covariance come from regeneration blocks of long one-sided streams, so the
finite-n replicates and the renewal estimators are independent.
"""
import functools
import logging
from logging import Logger
import math

import numpy as np
import pandas as pd
from scipy import stats

import constants
from context import ExperimentConfig
from experiments.runner import auxiliary_stream_id, log_verdict, run_replicates
from model.qparam import QParam, Regime
from model.results import CovarianceEstimate, Estimate
from permstat.estimators import estimate_covariance, estimate_mi, estimate_mu2i
from permstat.regeneration import paired_regen_blocks, regen_blocks
from permstat.statistics import cycle_counts
from qseries.limits import mu2_exact
from sampler.finite import sample_mallows_finite
from sampler.rng import RngStream
from sampler.stream import stream_mallows

logger: Logger = logging.getLogger(__name__)

CLT_COLUMNS: list[str] = ["q", "n", "replicates", "seed", "cycle_length", "center", "center_se",
                          "mean_std", "mean_band", "var_std", "cov_hat", "var_rel_err", "skew",
                          "excess_kurtosis", "cov_max_gap", "pass"]

def cycle_vector(q: float, n: int, rng: RngStream, ell: int, stride: int) -> np.ndarray:
    """(C_stride, C_2stride, ..., C_ell*stride) of one Mallows(n, q) draw"""
    counts = cycle_counts(sample_mallows_finite(n, q, rng))
    return np.array([counts[stride * i] for i in range(1, ell + 1)], dtype=float)

def _renewal_odd(config: ExperimentConfig, q_index: int,
                 q: float) -> tuple[list[Estimate], CovarianceEstimate]:
    stream = stream_mallows(q, RngStream(config.seed, auxiliary_stream_id(q_index)))
    blocks = regen_blocks(stream, max_steps=config.regen_steps)
    return ([estimate_mi(blocks, i) for i in range(1, config.ell + 1)],
            estimate_covariance(blocks, config.ell))

def _renewal_even(config: ExperimentConfig, q_index: int,
                  q: float) -> tuple[list[Estimate], CovarianceEstimate]:
    inverse = QParam(q).inverse()
    first = stream_mallows(inverse, RngStream(config.seed, auxiliary_stream_id(q_index, 0)))
    second = stream_mallows(inverse, RngStream(config.seed, auxiliary_stream_id(q_index, 1)))
    blocks = paired_regen_blocks(first, second, config.regen_steps)
    return ([estimate_mu2i(blocks, i) for i in range(1, config.ell + 1)],
            estimate_covariance(blocks, config.ell))

def _warn_undersized(config: ExperimentConfig) -> None:
    if config.n < constants.CLT_MIN_N or config.replicates < constants.CLT_MIN_REPLICATES:
        logger.warning("%s: bands are calibrated for n >= %d and replicates >= %d, got n=%d "
                       "replicates=%d", config.name, constants.CLT_MIN_N,
                       constants.CLT_MIN_REPLICATES, config.n, config.replicates)

def _moment_rows(config: ExperimentConfig, q: float, samples: np.ndarray, centers: list[Estimate],
                 covariance: CovarianceEstimate, stride: int) -> list[dict]:
    n, replicates = config.n, config.replicates
    center_values = np.array([c.mean for c in centers])
    standardized = (samples - center_values * n) / math.sqrt(n)
    empirical = np.atleast_2d(np.cov(standardized, rowvar=False, ddof=1))
    skew_band = max(constants.CLT_SKEW_BAND, constants.SE_BAND * math.sqrt(6.0 / replicates))
    kurtosis_band = max(constants.CLT_KURTOSIS_BAND, constants.SE_BAND * math.sqrt(24.0 / replicates))
    rows = []
    for i in range(1, config.ell + 1):
        column = standardized[:, i - 1]
        var_std = float(np.var(column, ddof=1))
        cov_hat = covariance[i, i]
        mean_band = constants.SE_BAND * math.sqrt(var_std / replicates + n * centers[i - 1].std_error ** 2)
        var_rel_err = abs(var_std - cov_hat) / cov_hat if cov_hat > 0 else math.inf
        skew = float(stats.skew(column))
        kurt = float(stats.kurtosis(column))
        passed = bool(abs(float(np.mean(column))) <= mean_band
                      and var_rel_err <= constants.CLT_VARIANCE_REL_TOL
                      and abs(skew) <= skew_band and abs(kurt) <= kurtosis_band)
        rows.append({**config.provenance(q), "cycle_length": stride * i,
                     "center": centers[i - 1].mean, "center_se": centers[i - 1].std_error,
                     "mean_std": float(np.mean(column)), "mean_band": mean_band,
                     "var_std": var_std, "cov_hat": cov_hat, "var_rel_err": var_rel_err,
                     "skew": skew, "excess_kurtosis": kurt,
                     "cov_max_gap": float(np.max(np.abs(empirical[i - 1] - covariance.matrix[i - 1]))),
                     "pass": passed})
    return rows

def run_clt_check(config: ExperimentConfig) -> pd.DataFrame:
    """
    Standardized moments of (C_i(Pi_n) - m_i n)/sqrt(n), i <= ell, for q < 1, with the
    variance compared to the renewal covariance P.
    """
    config.validate_regime(Regime.SUB_CRITICAL)
    _warn_undersized(config)
    task = functools.partial(cycle_vector, ell=config.ell, stride=1)
    rows = []
    for q_index, q in enumerate(config.q_grid):
        logger.info("%s: q=%.6g n=%d replicates=%d ell=%d", config.name, q, config.n,
                    config.replicates, config.ell)
        centers, covariance = _renewal_odd(config, q_index, q)
        samples = run_replicates(task, config, q_index, q)
        q_rows = _moment_rows(config, q, samples, centers, covariance, stride=1)
        for row in q_rows:
            log_verdict(logger, config, q, row["pass"],
                        f"C{row['cycle_length']}: skew {row['skew']:.3g} kurtosis "
                        f"{row['excess_kurtosis']:.3g} var {row['var_std']:.4g} vs P {row['cov_hat']:.4g}")
        rows.extend(q_rows)
    return pd.DataFrame(rows, columns=CLT_COLUMNS)

def run_even_clt_check(config: ExperimentConfig) -> pd.DataFrame:
    """
    As run_clt_check for q > 1 with C_{2i}(Pi_n). The 2-cycles are centered by the exact
    mu_2, which must also agree with its renewal estimate within the acceptance band.
    """
    config.validate_regime(Regime.SUPER_CRITICAL)
    _warn_undersized(config)
    task = functools.partial(cycle_vector, ell=config.ell, stride=2)
    rows = []
    for q_index, q in enumerate(config.q_grid):
        logger.info("%s: q=%.6g n=%d replicates=%d ell=%d", config.name, q, config.n,
                    config.replicates, config.ell)
        centers, covariance = _renewal_even(config, q_index, q)
        exact = mu2_exact(q, config.tol)
        renewal_agrees = centers[0].within(exact, constants.SE_BAND)
        log_verdict(logger, config, q, renewal_agrees,
                    f"renewal mu2 {centers[0]} vs exact {exact:.8g}")
        centers[0] = Estimate(mean=exact, std_error=0.0, replicates=centers[0].replicates)
        samples = run_replicates(task, config, q_index, q)
        q_rows = _moment_rows(config, q, samples, centers, covariance, stride=2)
        q_rows[0]["pass"] = q_rows[0]["pass"] and renewal_agrees
        for row in q_rows:
            log_verdict(logger, config, q, row["pass"],
                        f"C{row['cycle_length']}: skew {row['skew']:.3g} kurtosis "
                        f"{row['excess_kurtosis']:.3g} var {row['var_std']:.4g} vs Q {row['cov_hat']:.4g}")
        rows.extend(q_rows)
    return pd.DataFrame(rows, columns=CLT_COLUMNS)
