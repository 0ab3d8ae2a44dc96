"""
Parity effects for q > 1: odd-cycle counts stay tight with a limit law that depends on the
parity of n, and the fixed points of the reflected bi-infinite model show the matching
oscillation in their tails.
"""
import logging
from logging import Logger
import math

import numpy as np
import pandas as pd

import constants
from context import ExperimentConfig
from errors import DomainError
from experiments.runner import auxiliary_stream_id, log_verdict, run_replicates
from model.permutation import Reflection
from model.qparam import Regime
from model.results import Estimate
from oracle.gof import normalize_counts, total_variation, two_sample_chi_square
from permstat.statistics import cycle_counts, fixed_points_reflected
from qseries.limits import parity_tail_rate
from sampler.finite import sample_mallows_finite, sample_mallows_window, window_margin
from sampler.rng import RngStream

logger: Logger = logging.getLogger(__name__)

ODD_TIGHTNESS_COLUMNS: list[str] = ["q", "n", "replicates", "seed", "n_small", "n_large", "n_other_parity",
                                    "tv_same_parity", "tv_same_parity_se", "tv_parity", "tv_parity_se",
                                    "odd_mass_small", "odd_mass_large", "odd_mass_ratio",
                                    "chi2_same_parity_p", "pass"]
PARITY_TAIL_COLUMNS: list[str] = ["q", "n", "replicates", "seed", "W", "margin", "m", "p_rho_ge_m",
                                  "se_rho", "p_r_ge_m", "se_r", "tail_rate", "ordered", "pass"]

MIN_PARITY_WINDOW: int = 32

def _small_size(n: int) -> int:
    half = n // 2
    return half if half % 2 == n % 2 else half + 1

def _odd_cycles(q: float, n: int, rng: RngStream) -> tuple[float, float]:
    counts = cycle_counts(sample_mallows_finite(n, q, rng)).counts
    odd = np.arange(1, len(counts), 2)
    return float(counts[odd].sum()), float(np.dot(odd, counts[odd]))

def odd_cycle_profile(q: float, n: int, rng: RngStream) -> np.ndarray:
    """
    Number of odd cycles and number of elements in odd cycles at n_small, n and n+1,
    where n_small = n/2 rounded to the parity of n.
    """
    values: list[float] = []
    for size in (_small_size(n), n, n + 1):
        values.extend(_odd_cycles(q, size, rng))
    return np.array(values)

def _bootstrap_tv_se(first: np.ndarray, second: np.ndarray, rng: RngStream) -> float:
    """Standard deviation of TV between multinomial resamples of the two empirical pmfs"""
    support = np.union1d(first, second)
    p_first = np.array([np.count_nonzero(first == v) for v in support], dtype=float) / len(first)
    p_second = np.array([np.count_nonzero(second == v) for v in support], dtype=float) / len(second)
    generator = rng.generator
    draws_first = generator.multinomial(len(first), p_first, size=constants.BOOTSTRAP_RESAMPLES) / len(first)
    draws_second = generator.multinomial(len(second), p_second, size=constants.BOOTSTRAP_RESAMPLES) / len(second)
    return float(np.std(0.5 * np.abs(draws_first - draws_second).sum(axis=1), ddof=1))

def _counts(values: np.ndarray) -> dict[int, int]:
    support, counts = np.unique(values.astype(np.int64), return_counts=True)
    return dict(zip(support.tolist(), counts.tolist()))

def _pmf(values: np.ndarray) -> dict[int, float]:
    return normalize_counts(_counts(values))

def run_odd_tightness(config: ExperimentConfig) -> pd.DataFrame:
    """
    Law of the number of odd cycles for q > 1 at n/2 and n (same parity) and at n+1.
    Gates: TV(n/2, n) <= 0.02 + 4 SE, TV(n, n+1) >= 5 SE, and the mean number of elements in
    odd cycles grows by at most 20% from n/2 to n.
    """
    config.validate_regime(Regime.SUPER_CRITICAL)
    n_small, n_large = _small_size(config.n), config.n
    rows = []
    for q_index, q in enumerate(config.q_grid):
        logger.info("%s: q=%.6g n=%d,%d,%d replicates=%d", config.name, q, n_small, n_large,
                    n_large + 1, config.replicates)
        samples = run_replicates(odd_cycle_profile, config, q_index, q)
        small, large, other = samples[:, 0], samples[:, 2], samples[:, 4]
        bootstrap = RngStream(config.seed, auxiliary_stream_id(q_index))
        tv_same = total_variation(_pmf(small), _pmf(large))
        tv_same_se = _bootstrap_tv_se(small, large, bootstrap)
        tv_parity = total_variation(_pmf(large), _pmf(other))
        tv_parity_se = _bootstrap_tv_se(large, other, bootstrap)
        mass_small = Estimate.from_samples(samples[:, 1]).mean
        mass_large = Estimate.from_samples(samples[:, 3]).mean
        ratio = mass_large / mass_small if mass_small > 0 else math.inf
        chi2 = two_sample_chi_square(_counts(small), _counts(large))
        passed = bool(tv_same <= constants.ODD_TV_THRESHOLD + constants.SE_BAND * tv_same_se
                      and tv_parity >= 5.0 * tv_parity_se
                      and ratio <= constants.ODD_MASS_RATIO)
        log_verdict(logger, config, q, passed,
                    f"TV(n={n_small},{n_large}) {tv_same:.4g} ± {tv_same_se:.3g}, "
                    f"TV(n={n_large},{n_large + 1}) {tv_parity:.4g} ± {tv_parity_se:.3g}, "
                    f"odd mass ratio {ratio:.4g}")
        rows.append({**config.provenance(q), "n_small": n_small, "n_large": n_large,
                     "n_other_parity": n_large + 1, "tv_same_parity": tv_same,
                     "tv_same_parity_se": tv_same_se, "tv_parity": tv_parity,
                     "tv_parity_se": tv_parity_se, "odd_mass_small": mass_small,
                     "odd_mass_large": mass_large, "odd_mass_ratio": ratio,
                     "chi2_same_parity_p": chi2.p_value, "pass": passed})
    return pd.DataFrame(rows, columns=ODD_TIGHTNESS_COLUMNS)

def reflected_fixed_points(q: float, W: int, rng: RngStream) -> np.ndarray:
    """
    (C_1(r o Sigma), C_1(rho o Sigma)) over trusted indices, from a [-W..W] window for r
    and a [-W+1..W] window for rho.
    """
    odd_window = sample_mallows_window(W, q, rng)
    even_window = sample_mallows_window(W, q, rng, even=True)
    return np.array([fixed_points_reflected(odd_window, Reflection.R),
                     fixed_points_reflected(even_window, Reflection.RHO)], dtype=float)

def _tail(counts: np.ndarray, m: int) -> Estimate:
    hits = counts >= m
    p = float(np.mean(hits))
    return Estimate(mean=p, std_error=math.sqrt(p * (1.0 - p) / len(counts)), replicates=len(counts))

def _disjoint_above(upper: Estimate, lower: Estimate) -> bool:
    return upper.ci95()[0] > lower.ci95()[1]

def run_parity_tail(config: ExperimentConfig) -> pd.DataFrame:
    """
    Tails P[C_1(rho o Sigma) >= m] and P[C_1(r o Sigma) >= m], m = 1..2 kmax + 1, of the
    bi-infinite model with parameter q < 1. Even m should favour rho and odd m >= 3 should
    favour r; the gate is the k = 1 pair (m = 2, 3) with disjoint 95% intervals plus
    monotonicity of both tails.
    """
    config.validate_regime(Regime.SUB_CRITICAL)
    if config.W < MIN_PARITY_WINDOW:
        raise DomainError(f"{config.name} needs W >= {MIN_PARITY_WINDOW}, got {config.W}")
    if config.kmax < 1:
        raise DomainError(f"{config.name} needs kmax >= 1, got {config.kmax}")
    rows = []
    for q_index, q in enumerate(config.q_grid):
        margin = window_margin(config.W, q)
        if margin >= config.W:
            raise DomainError(f"trust margin {margin} leaves no index of a W={config.W} window at q={q}")
        logger.info("%s: q=%.6g W=%d margin=%d replicates=%d", config.name, q, config.W, margin,
                    config.replicates)
        samples = run_replicates(reflected_fixed_points, config, q_index, q, n=config.W)
        r_counts, rho_counts = samples[:, 0], samples[:, 1]
        tails = [(m, _tail(rho_counts, m), _tail(r_counts, m))
                 for m in range(1, 2 * config.kmax + 2)]
        monotone = all(later[1].mean <= earlier[1].mean and later[2].mean <= earlier[2].mean
                       for earlier, later in zip(tails, tails[1:]))
        for m, rho, r in tails:
            if m == 1:
                ordered = None
            elif m % 2 == 0:
                ordered = _disjoint_above(rho, r)
            else:
                ordered = _disjoint_above(r, rho)
            passed = monotone and (ordered if m in (2, 3) else True)
            if m in (2, 3):
                log_verdict(logger, config, q, passed,
                            f"m={m}: rho {rho.mean:.5g} ± {rho.std_error:.2g}, r {r.mean:.5g} ± "
                            f"{r.std_error:.2g}")
            rows.append({**config.provenance(q), "n": 2 * config.W + 1, "W": config.W,
                         "margin": margin, "m": m, "p_rho_ge_m": rho.mean, "se_rho": rho.std_error,
                         "p_r_ge_m": r.mean, "se_r": r.std_error,
                         "tail_rate": parity_tail_rate(q, m),
                         "ordered": ordered, "pass": passed})
    return pd.DataFrame(rows, columns=PARITY_TAIL_COLUMNS)
