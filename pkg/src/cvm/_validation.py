"""Input validation helpers and exception types."""

import numpy as np

INTEGER_ATOL = 1e-9


class UndefinedIndexError(ValueError):
    """Raised when an index value is undefined for the given input,
    e.g. a zero denominator."""


class IntegerMatrixError(ValueError):
    """Raised when an integer-only index receives non-integer entries."""


def check_weights(W, *, square=False, name="W"):
    """Return `W` as a finite 2D float array."""
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.size == 0:
        raise ValueError(f"{name} must be a non-empty 2D array, got shape {W.shape}")
    if not np.isfinite(W).all():
        raise ValueError(f"{name} contains non-finite entries")
    if square and W.shape[0] != W.shape[1]:
        raise ValueError(f"{name} must be square, got shape {W.shape}")
    return W


def check_confusion(C, *, square=False, min_k=1):
    """Validate an admissible confusion matrix.

    Entries must be finite and nonnegative and every row (reference
    cluster) must have a positive sum. Columns may be empty.
    """
    C = check_weights(C, square=square, name="confusion matrix")
    if (C < 0).any():
        raise ValueError("confusion matrix has negative entries")
    if C.sum(axis=1).min() <= 0:
        raise ValueError("confusion matrix has an empty reference cluster (zero row)")
    if C.shape[0] < min_k:
        raise ValueError(f"at least {min_k} reference clusters are required, got {C.shape[0]}")
    return C


def is_integer_matrix(C, atol=INTEGER_ATOL):
    C = np.asarray(C, dtype=float)
    return bool(np.all(np.abs(C - np.round(C)) <= atol))


def check_integer(C, index_name="index"):
    if not is_integer_matrix(C):
        raise IntegerMatrixError(f"{index_name} is defined for integer confusion matrices only")
    return np.round(np.asarray(C, dtype=float))


def check_positive(values, name="scale"):
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise ValueError(f"{name} must be positive and finite")
    return values
