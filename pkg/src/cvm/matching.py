"""Set-matching indices: accuracy variants built on optimal assignment.

The headline index is :func:`nca`, the normalised clustering accuracy:
the average per-cluster recall under the best one-to-one matching of
predicted to reference clusters, rescaled so that the uniform
assignment scores 0 and a perfect match scores 1.
"""

import numpy as np

from ._validation import UndefinedIndexError, check_confusion
from .assignment import (
    max_assignment_value,
    max_rectangular_assignment,
    max_surjective_matching,
)
from .core import ConfusionMatrix


def _matrix(C, square=True, min_k=1):
    c = np.asarray(C) if isinstance(C, ConfusionMatrix) else C
    return check_confusion(c, square=square, min_k=min_k)


def plain_accuracy(C):
    """Trace over total: classification accuracy with labels taken
    literally. Not permutation invariant; diagnostic only."""
    c = _matrix(C)
    return float(np.trace(c) / c.sum())


def purity(C, by="cols"):
    """Purity: each predicted cluster (``by="cols"``) or each reference
    cluster (``by="rows"``) contributes its largest overlap."""
    c = _matrix(C, square=False)
    if by == "cols":
        return float(c.max(axis=0).sum() / c.sum())
    if by == "rows":
        return float(c.max(axis=1).sum() / c.sum())
    raise ValueError(f"by must be 'cols' or 'rows', got {by!r}")


def pivoted_accuracy(C):
    """A: accuracy under the optimal relabelling of predicted clusters."""
    c = _matrix(C)
    return max_assignment_value(c) / c.sum()


def normalized_pivoted_accuracy(C):
    """NA: A rescaled from ``[1/k, 1]`` to ``[0, 1]``."""
    c = _matrix(C, min_k=2)
    k = c.shape[0]
    return (k * max_assignment_value(c) / c.sum() - 1.0) / (k - 1)


def _recall_weights(c):
    return c / c.sum(axis=1, keepdims=True)


def clustering_accuracy(C):
    """CA: mean per-reference-cluster recall under the optimal matching."""
    c = _matrix(C)
    return max_assignment_value(_recall_weights(c)) / c.shape[0]


def nca(C):
    """Normalised clustering accuracy.

    ``max_sigma (sum_i c[i, sigma(i)] / c[i, .] - 1) / (k - 1)``. Lies in
    ``[0, 1]``; equals 1 iff the prediction matches the reference up to a
    relabelling, and 0 for the uniform and the one-cluster predictions.

    Examples
    --------
    >>> nca([[0, 0, 5], [3, 0, 0], [0, 1, 0]])
    1.0
    """
    c = _matrix(C, min_k=2)
    return (max_assignment_value(_recall_weights(c)) - 1.0) / (c.shape[0] - 1)


def _braun_blanquet_weights(c):
    return c / np.maximum(c.sum(axis=1)[:, None], c.sum(axis=0)[None, :])


def braun_blanquet_accuracy(C):
    """BA: matched overlaps divided by the larger of the two cluster sizes."""
    c = _matrix(C)
    return max_assignment_value(_braun_blanquet_weights(c)) / c.shape[0]


def _ba_baseline(c):
    k = c.shape[0]
    n = c.sum()
    r = np.sort(c.sum(axis=1))[::-1]
    col = np.sort(c.sum(axis=0))[::-1]
    return float(np.sum(r * col / (n * np.maximum(r, col))) / k)


def normalized_braun_blanquet_accuracy(C):
    """NBA: BA rescaled against the baseline pairing sorted row sums with
    sorted column sums."""
    c = _matrix(C, min_k=2)
    ba = max_assignment_value(_braun_blanquet_weights(c)) / c.shape[0]
    base = _ba_baseline(c)
    if base >= 1.0:
        raise UndefinedIndexError("NBA baseline equals 1")
    return (ba - base) / (1.0 - base)


def pair_sets_index(C):
    """PSI: NBA clipped at 0."""
    return max(0.0, normalized_braun_blanquet_accuracy(C))


def nca_generalized(C, mode="penalizing"):
    """NCA for ``k x k'`` matrices.

    ``mode="penalizing"`` matches reference clusters injectively, missing
    predicted clusters counting as empty, so ``k' != k`` is penalised.
    ``mode="target"`` maps the larger side onto the smaller one, for
    benchmarks that deliberately request ``k'`` clusters. Both reduce to
    :func:`nca` when ``k' == k``.
    """
    c = _matrix(C, square=False, min_k=2)
    w = _recall_weights(c)
    if mode == "penalizing":
        value = max_rectangular_assignment(w).value
    elif mode in ("target", "target-cardinality"):
        value = max_surjective_matching(w).value
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return (value - 1.0) / (c.shape[0] - 1)


def perfect_match_indicator(C):
    """1 if `C` is a permuted diagonal matrix, else 0."""
    c = _matrix(C)
    nz = c > 0
    return float(np.all(nz.sum(axis=1) == 1) and np.all(nz.sum(axis=0) == 1))
