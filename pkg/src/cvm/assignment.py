"""Linear sum assignment (maximisation) and related matchings.

All public solvers maximise. The square solver is a shortest augmenting
path Hungarian method in O(k^3) run on ``max(W) - W``.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_weights

BRUTE_FORCE_MAX_K = 9


@dataclass(frozen=True)
class Assignment:
    """A matching between rows and columns of a weight matrix.

    Attributes
    ----------
    pairs : tuple of (int, int)
        Selected ``(row, column)`` cells, sorted by row then column.
    value : float
        Sum of the selected weights.
    mode : str
        ``"bijection"``, ``"injection"`` or ``"surjection"``.
    """

    pairs: tuple
    value: float
    mode: str = "bijection"

    @property
    def sigma(self):
        """Column matched to each row, for bijections (0-based)."""
        if self.mode != "bijection":
            raise AttributeError("sigma is only defined for bijections; use pairs")
        return tuple(j for _, j in self.pairs)


def _hungarian_min(cost):
    """Minimum-cost perfect matching on a square list-of-lists.

    Returns ``col_of_row``.
    """
    k = len(cost)
    inf = math.inf
    u = [0.0] * (k + 1)
    v = [0.0] * (k + 1)
    p = [0] * (k + 1)  # p[j]: row matched to column j (1-based, 0 = free)
    way = [0] * (k + 1)
    for i in range(1, k + 1):
        p[0] = i
        j0 = 0
        minv = [inf] * (k + 1)
        used = [False] * (k + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            row = cost[i0 - 1]
            ui0 = u[i0]
            delta = inf
            j1 = 0
            for j in range(1, k + 1):
                if not used[j]:
                    cur = row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(k + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    col_of_row = [0] * k
    for j in range(1, k + 1):
        col_of_row[p[j] - 1] = j - 1
    return col_of_row


def _value(W, rows, cols):
    return math.fsum(float(W[i, j]) for i, j in zip(rows, cols))


def _solve_square(W):
    cost = (W.max() - W).tolist()
    return _hungarian_min(cost)


def max_assignment(W):
    """Maximal linear sum assignment on a square weight matrix.

    The optimal value is unique; under ties the returned permutation is
    any optimum.
    """
    W = check_weights(W, square=True)
    sigma = _solve_square(W)
    pairs = tuple((i, j) for i, j in enumerate(sigma))
    return Assignment(pairs, _value(W, range(len(sigma)), sigma), "bijection")


def max_assignment_value(W):
    """Optimal value only; skips validation (internal fast path)."""
    sigma = _solve_square(W)
    return math.fsum(W[i, j] for i, j in enumerate(sigma))


def brute_force_assignment(W):
    """Exhaustive search over all permutations (``k <= 9``).

    Ties resolve to the lexicographically smallest permutation.
    """
    W = check_weights(W, square=True)
    k = W.shape[0]
    if k > BRUTE_FORCE_MAX_K:
        raise ValueError(f"brute force limited to k <= {BRUTE_FORCE_MAX_K}, got {k}")
    best, best_sigma = -math.inf, None
    rows = range(k)
    for sigma in itertools.permutations(range(k)):
        val = _value(W, rows, sigma)
        if val > best:
            best, best_sigma = val, sigma
    return Assignment(tuple(enumerate(best_sigma)), best, "bijection")


def greedy_recursive_pairing(W):
    """Pick the largest remaining entry, drop its row and column, repeat.

    Ties go to the smallest ``(row, column)``. Not optimal in general.
    """
    W = check_weights(W, square=True)
    k = W.shape[0]
    order = sorted(((-W[i, j], i, j) for i in range(k) for j in range(k)))
    free_rows, free_cols = set(range(k)), set(range(k))
    sigma = [0] * k
    for _, i, j in order:
        if i in free_rows and j in free_cols:
            sigma[i] = j
            free_rows.discard(i)
            free_cols.discard(j)
            if not free_rows:
                break
    return Assignment(tuple(enumerate(sigma)), _value(W, range(k), sigma), "bijection")


def _rectangular_pairs(W):
    k, kp = W.shape
    if k == kp:
        sigma = _solve_square(W)
        return [(i, sigma[i]) for i in range(k)]
    if k < kp:
        padded = np.zeros((kp, kp))
        padded[:k] = W
        sigma = _solve_square(padded)
        return [(i, sigma[i]) for i in range(k)]
    padded = np.zeros((k, k))
    padded[:kp] = W.T
    sigma = _solve_square(padded)
    return sorted((sigma[j], j) for j in range(kp))


def max_rectangular_assignment(W):
    """Optimal injection from the smaller side of `W` into the larger one.

    Equivalent to padding `W` with zero rows or columns to a square
    matrix and dropping the dummy matches.
    """
    W = check_weights(W)
    pairs = tuple(_rectangular_pairs(W))
    mode = "bijection" if W.shape[0] == W.shape[1] else "injection"
    return Assignment(pairs, _value(W, *zip(*pairs)), mode)


def max_surjective_matching(W):
    """Optimal surjection from the larger side of `W` onto the smaller one.

    Every element of the larger side is matched to exactly one element of
    the smaller side and every element of the smaller side is hit. For
    ``k' >= k`` (columns onto rows) an optimum consists of one
    representative column per row plus every other column sent to its
    best row; the representatives solve a rectangular assignment on
    ``W - colmax``. The case ``k' < k`` is the transpose.
    """
    W = check_weights(W)
    k, kp = W.shape
    if k == kp:
        return max_assignment(W)
    transposed = kp < k
    V = W.T if transposed else W  # rows = smaller side
    best_row = np.argmax(V, axis=0)
    colmax = V[best_row, np.arange(V.shape[1])]
    reps = _rectangular_pairs(V - colmax[None, :])
    target = best_row.copy()
    for i, j in reps:
        target[j] = i
    pairs = [(int(target[j]), j) for j in range(V.shape[1])]
    if transposed:
        pairs = [(j, i) for i, j in pairs]
    pairs.sort()
    return Assignment(tuple(pairs), _value(W, *zip(*pairs)), "surjection")
