import numpy as np
import pytest

from errors import InsufficientDataError
from oracle.enumerate import enumerate_pmf
from oracle.gof import (chi_square_gof, empirical_counts, normalize_counts, total_variation,
                        two_sample_chi_square)
from model.permutation import Permutation

def test_exact_counts_do_not_reject():
    pmf = enumerate_pmf(3, 0.5)
    observed = {key: p * 10_000 for key, p in pmf.as_map().items()}
    report = chi_square_gof(observed, pmf)
    assert report.statistic == pytest.approx(0.0, abs=1e-9)
    assert report.dof == 5
    assert report.p_value == pytest.approx(1.0)
    assert report.passes(0.001)

def test_sparse_cells_are_merged():
    probs = np.array([0.5, 0.4998, 0.0001, 0.0001])
    report = chi_square_gof(probs * 10_000, probs)
    assert report.dof == 1
    assert report.cells_merged == 3
    assert report.statistic == pytest.approx(0.0, abs=1e-9)

def test_counts_in_impossible_cells_reject():
    report = chi_square_gof(np.array([5000.0, 5000.0, 3.0]), np.array([0.5, 0.5, 0.0]))
    assert report.statistic == float("inf")
    assert report.p_value == 0.0
    stray = chi_square_gof({(1, 2): 6000, (2, 1): 4000, (3, 1, 2): 1}, enumerate_pmf(2, 1.0))
    assert stray.p_value == 0.0
    assert not stray.passes(0.001)

def test_observation_size_checks():
    with pytest.raises(InsufficientDataError):
        chi_square_gof(np.zeros(2), np.array([0.5, 0.5]))
    with pytest.raises(InsufficientDataError):
        chi_square_gof(np.array([3.0, 2.0]), np.array([0.5, 0.5]))
    small = chi_square_gof(np.array([3.0, 2.0]), np.array([0.5, 0.5]), min_total=1)
    assert small.dof == 0
    assert small.p_value == 1.0
    with pytest.raises(ValueError):
        chi_square_gof(np.array([1.0, 2.0, 3.0]), np.array([0.5, 0.5]))

def test_wrong_law_is_rejected():
    skewed = enumerate_pmf(4, 0.2)
    observed = {key: round(p * 20_000) for key, p in skewed.as_map().items()}
    report = chi_square_gof(observed, enumerate_pmf(4, 1.0))
    assert report.p_value < 1e-10

def test_empirical_counts_key_permutations():
    counts = empirical_counts([Permutation.from_images([2, 1]), Permutation.identity(2),
                               Permutation.from_images([2, 1])])
    assert counts == {(2, 1): 2, (1, 2): 1}
    assert empirical_counts([3, 3, 4]) == {3: 2, 4: 1}

def test_two_sample_chi_square():
    same = two_sample_chi_square({"a": 400, "b": 600}, {"a": 400, "b": 600})
    assert same.statistic == pytest.approx(0.0, abs=1e-12)
    assert same.p_value == pytest.approx(1.0)
    apart = two_sample_chi_square({"a": 1000}, {"b": 1000})
    assert apart.dof == 1
    assert apart.p_value < 1e-100
    single = two_sample_chi_square({"a": 50}, {"a": 50})
    assert single.dof == 0
    assert single.p_value == 1.0
    with pytest.raises(InsufficientDataError):
        two_sample_chi_square({}, {"a": 3})

def test_total_variation_and_normalization():
    assert total_variation({"a": 0.5, "b": 0.5}, {"a": 1.0}) == pytest.approx(0.5)
    assert total_variation({"a": 1.0}, {"a": 1.0}) == 0.0
    assert normalize_counts({"a": 1, "b": 3}) == {"a": 0.25, "b": 0.75}
    with pytest.raises(InsufficientDataError):
        normalize_counts({})
