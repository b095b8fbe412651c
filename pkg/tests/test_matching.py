import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cvm._validation import UndefinedIndexError
from cvm.core import (
    block_diagonal,
    normalize_rows,
    one_column_matrix,
    permute,
    scale_rows,
    transfer,
    uniform_matrix,
)
from cvm.matching import (
    braun_blanquet_accuracy,
    clustering_accuracy,
    nca,
    nca_generalized,
    normalized_braun_blanquet_accuracy,
    normalized_pivoted_accuracy,
    pair_sets_index,
    perfect_match_indicator,
    pivoted_accuracy,
    plain_accuracy,
    purity,
)
from cvm.pairs import fowlkes_mallows_prime, normalized_fowlkes_mallows_prime, normalized_rand_prime
from cvm.randmodels import dmd_sample
from oracles import best_injection_value, best_permutation_value, best_surjection_value

PERM_DIAG = np.array([[0, 0, 5], [3, 0, 0], [0, 1, 0]], dtype=float)
OMEGA = [[50, 25], [25, 0]]


def test_plain_accuracy():
    assert plain_accuracy(PERM_DIAG) == 0
    assert plain_accuracy(np.diag([2, 3])) == 1
    assert plain_accuracy(np.asarray(permute(PERM_DIAG, [2, 0, 1]))) == 1
    with pytest.raises(ValueError):
        plain_accuracy([[1, 2, 3]])


def test_purity():
    assert purity(PERM_DIAG, "cols") == 1 and purity(PERM_DIAG, "rows") == 1
    s = np.array([3.0, 7.0, 2.0])
    assert purity(one_column_matrix(s)) == pytest.approx(7 / 12)
    assert purity(uniform_matrix([4, 4, 4])) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        purity(PERM_DIAG, "diagonal")


def test_perm_diag_perfect():
    for f in (nca, clustering_accuracy, pivoted_accuracy, normalized_pivoted_accuracy,
              braun_blanquet_accuracy, normalized_braun_blanquet_accuracy, pair_sets_index):
        assert f(PERM_DIAG) == pytest.approx(1.0, abs=1e-15)
    assert perfect_match_indicator(PERM_DIAG) == 1.0


def test_omega():
    assert normalized_braun_blanquet_accuracy(OMEGA) == pytest.approx(-1 / 3, abs=1e-12)
    assert pair_sets_index(OMEGA) == 0.0


def test_k_at_least_two():
    with pytest.raises(ValueError):
        nca([[3]])
    with pytest.raises(ValueError):
        normalized_pivoted_accuracy([[3]])


def test_nba_baseline_below_one():
    # the sorted-margin baseline is at most 1/k, so NBA is defined for k >= 2
    from cvm.matching import _ba_baseline
    assert _ba_baseline(np.eye(3)) == pytest.approx(1 / 3)


@pytest.mark.parametrize("seed", range(40))
def test_table_one_rows(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(2, 9))
    s = rng.uniform(0.5, 60, size=k)
    n = s.sum()
    U, O = uniform_matrix(s), one_column_matrix(s)
    assert pivoted_accuracy(U) == pytest.approx(1 / k)
    assert clustering_accuracy(U) == pytest.approx(1 / k)
    assert clustering_accuracy(O) == pytest.approx(1 / k)
    assert pivoted_accuracy(O) == pytest.approx(s.max() / n)
    assert braun_blanquet_accuracy(O) == pytest.approx(s.max() / (k * n))
    assert normalized_pivoted_accuracy(O) == pytest.approx((k * s.max() - n) / (n * (k - 1)))
    assert abs(nca(U)) <= 1e-12 and abs(nca(O)) <= 1e-12


def _block_matrix(rng):
    k = int(rng.integers(2, 9))
    l = int(rng.integers(1, k + 1))
    cuts = np.sort(rng.choice(np.arange(1, k), size=l - 1, replace=False)) if l > 1 else []
    sizes = np.diff(np.concatenate([[0], cuts, [k]])).astype(int)
    row_sum = float(rng.integers(1, 50) * np.lcm.reduce(sizes))
    return block_diagonal(sizes, row_sum / sizes), k, l


def test_block_diagonal_six_by_six():
    B = block_diagonal([3, 1, 2], [100, 300, 150])
    assert pivoted_accuracy(B) == pytest.approx(0.5)
    assert nca(B) == pytest.approx(0.4)


@pytest.mark.parametrize("seed", range(40))
def test_block_diagonal_block_diagonal(seed):
    B, k, l = _block_matrix(np.random.default_rng(seed))
    for f in (pivoted_accuracy, braun_blanquet_accuracy, clustering_accuracy,
              fowlkes_mallows_prime):
        assert f(B) == pytest.approx(l / k, abs=1e-10)
    for f in (normalized_pivoted_accuracy, nca, normalized_rand_prime,
              normalized_fowlkes_mallows_prime):
        assert f(B) == pytest.approx((l - 1) / (k - 1), abs=1e-10)
    if l < k:
        assert normalized_braun_blanquet_accuracy(B) == pytest.approx((l - 1) / (k - 1), abs=1e-10)


square = st.integers(2, 7).flatmap(
    lambda k: arrays(float, (k, k), elements=st.floats(0, 100, allow_nan=False, width=32))
).filter(lambda C: np.all(C.sum(axis=1) > 0))


@given(square)
def test_lower_bounds(C):
    k = C.shape[0]
    assert pivoted_accuracy(C) >= 1 / k - 1e-12
    assert clustering_accuracy(C) >= 1 / k - 1e-12
    assert -1e-12 <= nca(C) <= 1 + 1e-12
    assert -1e-12 <= normalized_pivoted_accuracy(C) <= 1 + 1e-12


@given(square)
def test_nca_is_na_of_row_normalised(C):
    assert nca(C) == pytest.approx(normalized_pivoted_accuracy(normalize_rows(C)), abs=1e-12)


@given(square, st.data())
def test_nca_size_invariance(C, data):
    s = data.draw(arrays(float, C.shape[0], elements=st.floats(0.01, 100)))
    for f in (nca, clustering_accuracy):
        assert f(scale_rows(C, s)) == pytest.approx(f(C), abs=1e-12)


@given(square)
def test_psi_clips_nba(C):
    try:
        nba = normalized_braun_blanquet_accuracy(C)
    except UndefinedIndexError:
        return
    assert pair_sets_index(C) == max(0.0, nba)


@pytest.mark.parametrize("seed", range(40))
def test_matches_enumeration(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(2, 7))
    C = rng.integers(0, 30, size=(k, k)).astype(float)
    C[:, 0] += 1
    r = C.sum(axis=1, keepdims=True)
    assert nca(C) == pytest.approx((best_permutation_value(C / r) - 1) / (k - 1), abs=1e-12)
    assert pivoted_accuracy(C) == pytest.approx(best_permutation_value(C) / C.sum(), abs=1e-12)


@pytest.mark.parametrize("seed", range(30))
def test_linear_response_on_dmd(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(2, 6))
    C = np.asarray(dmd_sample(rng.integers(2 * k, 80, size=k), rng))
    i = int(rng.integers(k))
    j = int((i + 1 + rng.integers(k - 1)) % k)
    if C[i, j] < 1:
        return
    D = np.asarray(transfer(C, i, j, 1.0))
    n, ri = C.sum(), C[i].sum()
    assert pivoted_accuracy(D) - pivoted_accuracy(C) == pytest.approx(1 / n, rel=1e-9)
    assert normalized_pivoted_accuracy(D) - normalized_pivoted_accuracy(C) == pytest.approx(
        1 / (n - n / k), rel=1e-9)
    assert clustering_accuracy(D) - clustering_accuracy(C) == pytest.approx(1 / (k * ri), rel=1e-9)
    assert nca(D) - nca(C) == pytest.approx(1 / ((k - 1) * ri), rel=1e-9)


def test_nca_generalized_examples():
    C = [[5, 0, 0], [0, 3, 2]]
    assert nca_generalized(C, "penalizing") == pytest.approx(0.6)
    assert nca_generalized(C, "target") == pytest.approx(1.0)
    with pytest.raises(ValueError):
        nca_generalized(C, "other")


@pytest.mark.parametrize("seed", range(60))
def test_nca_generalized_vs_enumeration(seed):
    rng = np.random.default_rng(seed)
    k, kp = (int(x) for x in rng.integers(2, 6, size=2))
    C = rng.integers(0, 10, size=(k, kp)).astype(float)
    C[:, 0] += 1
    W = C / C.sum(axis=1, keepdims=True)
    assert nca_generalized(C, "penalizing") == pytest.approx(
        (best_injection_value(W) - 1) / (k - 1), abs=1e-12)
    assert nca_generalized(C, "target") == pytest.approx(
        (best_surjection_value(W) - 1) / (k - 1), abs=1e-12)
    if k == kp:
        assert nca_generalized(C, "penalizing") == pytest.approx(nca(C), abs=1e-12)
        assert nca_generalized(C, "target") == pytest.approx(nca(C), abs=1e-12)


def test_perfect_match_indicator():
    assert perfect_match_indicator(np.diag([1, 2])[[1, 0]]) == 1.0
    assert perfect_match_indicator([[1, 1], [0, 2]]) == 0.0


def test_degenerate_predictions_distinguished():
    # most points in one cluster vs a near-perfect labelling
    s = [40, 40, 40]
    almost_one = np.asarray(one_column_matrix(s)).copy()
    almost_one[1, 0] -= 1
    almost_one[1, 1] += 1
    almost_one[2, 0] -= 1
    almost_one[2, 2] += 1
    assert nca(almost_one) < 0.05
    assert clustering_accuracy(almost_one) > 1 / 3
    assert nca(almost_one) < clustering_accuracy(almost_one)
