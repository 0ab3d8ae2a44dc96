import math

import numpy as np
import pytest

import constants
from errors import DomainError
from model.permutation import Permutation
from model.results import Estimate
from oracle.enumerate import enumerate_pmf
from oracle.gof import chi_square_gof, empirical_counts, two_sample_chi_square
from permstat.additive import fixed_point_count
from permstat.statistics import inversions
from qseries.arc_chain import expected_fixed_points
from qseries.displacement import displacement_pmf
from qseries.stationary import nu_stationary
from sampler.finite import (reverse_compose, sample_mallows_finite, sample_mallows_two_sided,
                            sample_mallows_window, window_margin)
from sampler.geometric import TruncGeomSpec, sample_trunc_geom, trunc_geom_inverse
from sampler.rng import RngStream
from sampler.stream import MallowsStream, sample_regeneration_gaps, stream_mallows

def test_rng_stream_reproducible(make_rng):
    first = make_rng(7).uniform(16)
    again = make_rng(7).uniform(16)
    other = make_rng(8).uniform(16)
    assert np.array_equal(first, again)
    assert not np.array_equal(first, other)

def test_rng_stream_restart(make_rng):
    stream = make_rng(3)
    head = stream.uniform(4)
    stream.uniform(100)
    assert np.array_equal(stream.restart().uniform(4), head)

@pytest.mark.parametrize("seed, stream_id", [(-1, 0), (0, -1), (2 ** 64, 0)])
def test_rng_stream_rejects_keys(seed, stream_id):
    with pytest.raises(ValueError):
        RngStream(seed, stream_id)

@pytest.mark.parametrize("n, p", [(1, 0.4), (5, 0.3), (12, 0.9), (7, 0.0), (4, 1.0)])
def test_trunc_geom_pmf_sums_to_one(n, p):
    spec = TruncGeomSpec(n, p)
    assert math.fsum(spec.pmf(k) for k in range(1, n + 1)) == pytest.approx(1.0, abs=1e-14)
    assert spec.pmf(0) == 0.0
    assert spec.pmf(n + 1) == 0.0

def test_trunc_geom_spec_validation():
    with pytest.raises(ValueError):
        TruncGeomSpec(0, 0.5)
    with pytest.raises(ValueError):
        TruncGeomSpec(3, 1.5)

def test_trunc_geom_inverse_edges():
    u = np.array([0.0, 0.5, np.nextafter(1.0, 0.0)])
    assert trunc_geom_inverse(u, 6, 0.3).tolist()[0] == 1
    assert trunc_geom_inverse(u, 6, 0.3).tolist()[-1] == 6
    assert trunc_geom_inverse(u, 6, 0.0).tolist() == [1, 4, 6]
    assert trunc_geom_inverse(u, 6, 1.0).tolist() == [1, 1, 1]
    assert trunc_geom_inverse(u, 1, 0.3).tolist() == [1, 1, 1]

def test_trunc_geom_frequencies(rng):
    spec = TruncGeomSpec(5, 0.3)
    draws = trunc_geom_inverse(rng.uniform(200_000), spec.n, spec.p)
    for k in range(1, 6):
        hits = (draws == k).astype(float)
        assert Estimate.from_samples(hits).within(spec.pmf(k), 5.0)

def test_sample_trunc_geom_in_range(rng):
    spec = TruncGeomSpec(4, 0.6)
    assert {sample_trunc_geom(spec, rng) for _ in range(500)} <= {1, 2, 3, 4}
    assert sample_trunc_geom(TruncGeomSpec(1, 0.6), rng) == 1

@pytest.mark.parametrize("q", [0.3, 1.0, 3.0])
def test_finite_sampler_returns_permutations(q, rng):
    for n in (1, 2, 17, 1000):
        perm = sample_mallows_finite(n, q, rng)
        assert perm.n == n
        assert perm.is_valid()

def test_two_sided_sampler_returns_permutations(rng):
    for n in (1, 2, 3, 50, 501):
        assert sample_mallows_two_sided(n, 0.6, rng).is_valid()

def test_samplers_reject_bad_arguments(rng):
    with pytest.raises(DomainError):
        sample_mallows_finite(0, 0.5, rng)
    with pytest.raises(DomainError):
        sample_mallows_finite(5, 0.0, rng)
    with pytest.raises(DomainError):
        sample_mallows_two_sided(5, 1.0, rng)
    with pytest.raises(DomainError):
        sample_mallows_two_sided(5, 2.0, rng)

def test_large_q_is_reversal_of_small_q(make_rng):
    direct = sample_mallows_finite(40, 2.0, make_rng(11))
    mirrored = reverse_compose(sample_mallows_finite(40, 0.5, make_rng(11)))
    assert direct == mirrored

def test_small_q_is_nearly_identity(rng):
    perm = sample_mallows_finite(200, 1e-9, rng)
    assert fixed_point_count(perm) == 200

def test_mean_fixed_points_matches_exact(rng):
    n, q = 50, 0.5
    values = [fixed_point_count(sample_mallows_finite(n, q, rng)) for _ in range(4000)]
    assert Estimate.from_samples(np.array(values)).within(expected_fixed_points(n, q), 5.0)

@pytest.mark.parametrize("sampler, q", [
    (sample_mallows_finite, 0.6),
    (sample_mallows_two_sided, 0.6),
    (sample_mallows_finite, 1.7),
])
def test_samplers_fit_exact_pmf(sampler, q, rng):
    counts = empirical_counts(sampler(4, q, rng) for _ in range(20_000))
    report = chi_square_gof(counts, enumerate_pmf(4, q))
    assert report.p_value > 1e-4

@pytest.mark.slow
@pytest.mark.parametrize("sampler, q", [
    (sample_mallows_finite, 0.7),
    (sample_mallows_two_sided, 0.7),
    (sample_mallows_finite, 2.0),
])
def test_samplers_fit_exact_pmf_million_draws(sampler, q, rng):
    counts = empirical_counts(sampler(5, q, rng) for _ in range(1_000_000))
    report = chi_square_gof(counts, enumerate_pmf(5, q))
    assert report.p_value > 1e-4

def test_window_margin():
    assert window_margin(10, 0.5) == 9
    assert window_margin(64, 0.5) == 15
    assert window_margin(0, 0.5) == 0
    with pytest.raises(DomainError):
        window_margin(10, 1.5)

def test_odd_and_even_windows(rng):
    odd = sample_mallows_window(10, 0.5, rng)
    assert odd.offset == -10
    assert odd.length == 21
    assert odd.is_valid()
    assert odd.margin == 9
    assert len(odd.trusted_indices()) == 3
    even = sample_mallows_window(10, 0.5, rng, even=True)
    assert even.offset == -9
    assert even.length == 20
    assert even.is_valid()

def test_window_rejects_bad_sizes(rng):
    with pytest.raises(DomainError):
        sample_mallows_window(-1, 0.5, rng)
    with pytest.raises(DomainError):
        sample_mallows_window(0, 0.5, rng, even=True)
    with pytest.raises(DomainError):
        sample_mallows_window(5, 2.0, rng)

def test_stream_flags_mark_self_mapped_prefixes(rng):
    stream = stream_mallows(0.5, rng)
    pairs = [next(stream) for _ in range(3000)]
    values = np.array([value for value, _ in pairs])
    flags = np.array([flag for _, flag in pairs])
    assert len(set(values.tolist())) == len(values)
    assert values.min() >= 1
    assert np.array_equal(flags, np.maximum.accumulate(values) == np.arange(1, len(values) + 1))
    assert stream.position == 3000
    assert stream.M == stream.frontier - 3000

def test_stream_rejects_large_q(rng):
    with pytest.raises(DomainError):
        stream_mallows(1.0, rng)

def test_regeneration_gap_mean(rng):
    q = 0.5
    gaps = sample_regeneration_gaps(q, rng, 20_000)
    assert (gaps >= 1).all()
    assert Estimate.from_samples(gaps).within(1.0 / nu_stationary(q)[0], 5.0)

def test_regeneration_gap_count(rng):
    assert len(sample_regeneration_gaps(0.3, rng, 0)) == 0
    with pytest.raises(DomainError):
        sample_regeneration_gaps(0.3, rng, -1)

def test_reverse_compose_examples(rng):
    assert reverse_compose(Permutation.identity(3)).to_line() == "3 2 1"
    perm = sample_mallows_finite(8, 0.6, rng)
    assert reverse_compose(reverse_compose(perm)) == perm
    assert inversions(reverse_compose(perm)) + inversions(perm) == math.comb(8, 2)

def test_window_centre_follows_displacement_law(rng):
    pmf = displacement_pmf(0.5)
    centres = np.array([sample_mallows_window(16, 0.5, rng).image(0) for _ in range(20_000)])
    for d in range(-3, 4):
        assert Estimate.from_samples((centres == d).astype(float)).within(pmf[d], 5.0)

def test_one_and_two_sided_samplers_agree(make_rng):
    one_sided, two_sided = make_rng(21), make_rng(22)
    report = two_sample_chi_square(
        empirical_counts(sample_mallows_finite(4, 0.5, one_sided) for _ in range(20_000)),
        empirical_counts(sample_mallows_two_sided(4, 0.5, two_sided) for _ in range(20_000)))
    assert report.p_value > 1e-4

def test_first_stream_value_is_geometric(make_rng):
    firsts = np.array([next(stream_mallows(0.5, make_rng(1000 + k)))[0] for k in range(20_000)],
                      dtype=float)
    assert Estimate.from_samples(firsts).within(2.0, 5.0)

def _list_stream(draws: list[int]) -> list[tuple[int, bool]]:
    holes: list[int] = []
    frontier = 0
    out = []
    for z in draws:
        if z <= len(holes):
            value = holes.pop(z - 1)
        else:
            value = frontier + z - len(holes)
            holes.extend(range(frontier + 1, value))
            frontier = value
        out.append((value, not holes))
    return out

@pytest.mark.parametrize("q, capacity", [(0.5, constants.STREAM_HOLE_CAPACITY), (0.9, 1)])
def test_stream_matches_list_of_holes(q, capacity, make_rng):
    draws = make_rng(31).geometric(1.0 - q, constants.STREAM_BATCH).tolist()
    stream = MallowsStream(q, make_rng(31), capacity=capacity)
    assert [next(stream) for _ in range(len(draws))] == _list_stream(draws)
    assert stream.holes == sorted(stream.holes)
    assert len(stream.holes) == stream.M

def test_stream_gaps_are_stationary(make_rng):
    stream = stream_mallows(0.5, make_rng(41))
    gaps, last = [], 0
    for j in range(1, 200_001):
        _, regenerates = next(stream)
        if regenerates:
            gaps.append(j - last)
            last = j
    half = len(gaps) // 2
    report = two_sample_chi_square(empirical_counts(gaps[:half]), empirical_counts(gaps[half:]))
    assert report.p_value > constants.GOF_ALPHA
    assert Estimate.from_samples(np.array(gaps, dtype=float)).within(1.0 / nu_stationary(0.5)[0], 5.0)

def test_frequencies_follow_inversion_weights(rng):
    q, draws = 0.5, 200_000
    counts = empirical_counts(sample_mallows_finite(4, q, rng) for _ in range(draws))
    identity = Permutation.identity(4).key()
    for key, count in counts.items():
        perm = Permutation.from_images(key)
        # delta-method SE of log(count_a / count_b)
        se = math.sqrt(1.0 / count + 1.0 / counts[identity])
        assert abs(math.log(count / counts[identity]) - inversions(perm) * math.log(q)) <= 5.0 * se
