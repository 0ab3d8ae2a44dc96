import numpy as np
import pytest

from errors import DomainError
from model.order_statistic import OrderStatisticTree
from model.permutation import CycleCounts, Permutation, Reflection, WindowPermutation
from model.qparam import QParam, Regime
from model.results import Estimate

def test_order_statistic_tree_selects_and_removes():
    tree = OrderStatisticTree(10)
    assert len(tree) == 10
    assert tree.find(1) == 1
    assert tree.find(10) == 10
    assert tree.pop_kth(3) == 3
    assert tree.find(3) == 4
    assert tree.pop_kth_largest(1) == 10
    assert tree.prefix_count(5) == 4
    assert len(tree) == 8

def test_order_statistic_tree_matches_sorted_list(rng):
    present = list(range(1, 38))
    tree = OrderStatisticTree(37)
    for u in rng.uniform(37):
        k = int(u * len(present)) + 1
        assert tree.pop_kth(k) == present.pop(k - 1)
    assert len(tree) == 0

def test_order_statistic_tree_empty_start():
    tree = OrderStatisticTree(6, filled=False)
    tree.insert(4)
    tree.insert(2)
    assert [tree.find(1), tree.find(2)] == [2, 4]
    with pytest.raises(IndexError):
        tree.find(3)
    with pytest.raises(IndexError):
        tree.insert(7)
    with pytest.raises(ValueError):
        OrderStatisticTree(-1)

@pytest.mark.parametrize("q, regime", [(0.5, Regime.SUB_CRITICAL), (1, Regime.CRITICAL),
                                       (3.0, Regime.SUPER_CRITICAL)])
def test_qparam_regime(q, regime):
    assert QParam.of(q).regime is regime

@pytest.mark.parametrize("q", [0.0, -1.0, float("nan"), float("inf")])
def test_qparam_rejects(q):
    with pytest.raises(DomainError):
        QParam(q)

def test_qparam_requirements():
    qp = QParam.of(2.0)
    assert QParam.of(qp) is qp
    assert qp.inverse().q == 0.5
    assert qp.require_supercritical("mu2") is qp
    with pytest.raises(DomainError, match="m1 requires 0 < q < 1"):
        qp.require_subcritical("m1")
    with pytest.raises(DomainError):
        QParam(1.0).require_supercritical("mu2")

def test_permutation_algebra():
    perm = Permutation.from_line("2 3 1")
    assert perm(1) == 2
    assert perm.compose(perm.inverse()) == Permutation.identity(3)
    assert perm.compose(perm).to_line() == "3 1 2"
    assert hash(perm) == hash(Permutation.from_images([2, 3, 1]))
    with pytest.raises(ValueError):
        Permutation.from_images([1, 1, 3])
    with pytest.raises(ValueError):
        perm.compose(Permutation.identity(2))

def test_window_permutation_reflections():
    window = WindowPermutation(offset=-2, images=np.array([-1, -2, 0, 2, 1]), margin=1)
    assert window.is_valid()
    assert window.to_permutation().to_line() == "2 1 3 5 4"
    assert window.trusted_indices().tolist() == [-1, 0, 1]
    assert window.closed_under(Reflection.R)
    assert not window.closed_under(Reflection.RHO)
    assert WindowPermutation(offset=-1, images=np.array([-1, 0, 1, 2])).closed_under(Reflection.RHO)

def test_cycle_counts_vector():
    counts = CycleCounts(np.array([0, 2, 1, 0, 1]))
    assert counts.total_cycles == 4
    assert counts.size == 8
    assert counts[7] == 0
    assert counts.vector(2).tolist() == [2, 1]
    assert counts.vector(6).tolist() == [2, 1, 0, 1, 0, 0]

def test_estimate():
    estimate = Estimate.from_samples(np.array([1.0, 2.0, 3.0]))
    assert estimate.mean == 2.0
    assert estimate.std_error == pytest.approx(1.0 / np.sqrt(3.0))
    low, high = estimate.ci95()
    assert low < 2.0 < high
    assert Estimate.from_samples(np.array([4.0])).std_error == 0.0
    with pytest.raises(ValueError):
        Estimate(mean=0.0, std_error=-1.0, replicates=3)
