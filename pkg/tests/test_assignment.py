import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cvm.assignment import (
    brute_force_assignment,
    greedy_recursive_pairing,
    max_assignment,
    max_assignment_value,
    max_rectangular_assignment,
    max_surjective_matching,
)
from oracles import best_injection_value, best_permutation_value, best_surjection_value

WORKED = np.array([[50, 25, 25], [21, 40, 39], [39, 39, 22]], dtype=float)


def test_worked_optimum():
    a = max_assignment(WORKED)
    assert a.value == 128 and a.sigma == (0, 2, 1)
    b = brute_force_assignment(WORKED)
    assert b.value == 128 and b.sigma == (0, 2, 1)


def test_worked_greedy():
    g = greedy_recursive_pairing(WORKED)
    assert g.value == 112 and g.sigma == (0, 1, 2)


def test_diagonal():
    a = max_assignment(np.diag([3.0, 1.0, 2.0]))
    assert a.sigma == (0, 1, 2) and a.value == 6
    assert greedy_recursive_pairing(np.diag([3.0, 1.0, 2.0])).sigma == (0, 1, 2)


def test_brute_force_tie_break():
    b = brute_force_assignment(np.full((4, 4), 2.5))
    assert b.sigma == (0, 1, 2, 3) and b.value == 10


def test_brute_force_limit():
    with pytest.raises(ValueError):
        brute_force_assignment(np.zeros((10, 10)))


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        max_assignment(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        max_assignment([[1, np.nan], [0, 1]])
    with pytest.raises(ValueError):
        greedy_recursive_pairing(np.zeros((2, 3)))


@pytest.mark.parametrize("seed", range(200))
def test_hungarian_equals_enumeration(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(2, 8))
    W = rng.integers(0, 10, size=(k, k)).astype(float) if seed % 2 else rng.normal(size=(k, k))
    a = max_assignment(W)
    assert a.value == pytest.approx(best_permutation_value(W), rel=1e-12, abs=1e-12)
    assert sorted(a.sigma) == list(range(k))
    assert a.value == pytest.approx(sum(W[i, j] for i, j in a.pairs), rel=1e-12)
    assert greedy_recursive_pairing(W).value <= a.value + 1e-12


square = st.integers(1, 6).flatmap(
    lambda k: arrays(float, (k, k), elements=st.floats(-100, 100, allow_nan=False, width=32)))


@given(square, st.floats(-50, 50, allow_nan=False), st.randoms())
def test_shift_and_permutation(W, c, rnd):
    k = W.shape[0]
    v = max_assignment_value(W)
    assert max_assignment_value(W + c) == pytest.approx(v + k * c, rel=1e-9, abs=1e-7)
    p = list(range(k))
    rnd.shuffle(p)
    q = list(range(k))
    rnd.shuffle(q)
    assert max_assignment_value(W[p][:, q]) == pytest.approx(v, rel=1e-12, abs=1e-9)


def test_rectangular_small():
    a = max_rectangular_assignment([[1, 0, 0], [0, 0, 2]])
    assert a.value == 3 and a.pairs == ((0, 0), (1, 2)) and a.mode == "injection"


def test_rectangular_square_reduces():
    assert max_rectangular_assignment(WORKED).value == 128


def test_surjective_small():
    s = max_surjective_matching([[1, 0, 0.9], [0, 1, 0.8]])
    assert s.value == pytest.approx(2.9)
    assert s.pairs == ((0, 0), (0, 2), (1, 1)) and s.mode == "surjection"
    assert max_surjective_matching(WORKED).value == 128


def test_sigma_only_for_bijections():
    with pytest.raises(AttributeError):
        max_rectangular_assignment([[1, 0, 0], [0, 0, 2]]).sigma


@pytest.mark.parametrize("seed", range(150))
def test_rectangular_and_surjective_vs_enumeration(seed):
    rng = np.random.default_rng(1000 + seed)
    k, kp = rng.integers(1, 6, size=2)
    W = rng.uniform(0, 1, size=(k, kp))
    r = max_rectangular_assignment(W)
    s = max_surjective_matching(W)
    assert r.value == pytest.approx(best_injection_value(W), rel=1e-12)
    assert s.value == pytest.approx(best_surjection_value(W), rel=1e-12)
    # every element of the larger side is matched exactly once
    big = 1 if kp >= k else 0
    assert sorted(p[big] for p in s.pairs) == list(range(max(k, kp)))
    assert {p[1 - big] for p in s.pairs} == set(range(min(k, kp)))


@pytest.mark.parametrize("seed", range(30))
def test_optimum_dominates_random_matchings(seed):
    rng = np.random.default_rng(seed)
    W = rng.uniform(size=(4, 6))
    best = max_rectangular_assignment(W).value
    for _ in range(20):
        cols = rng.permutation(6)[:4]
        assert W[np.arange(4), cols].sum() <= best + 1e-12
