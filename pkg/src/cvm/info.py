"""Information-theoretic indices (natural logarithm throughout)."""

import math
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from ._validation import UndefinedIndexError, check_confusion, check_integer
from .core import ConfusionMatrix

LOG_FACTORIAL_CAPACITY = 10**6

_log_factorial = np.zeros(1)


def log_factorial_table(n, capacity=None):
    """``log(m!)`` for ``m = 0..n``, grown on demand and shared read-only."""
    global _log_factorial
    cap = LOG_FACTORIAL_CAPACITY if capacity is None else capacity
    if n > cap:
        raise ValueError(f"n={n} exceeds the log-factorial capacity {cap}")
    if _log_factorial.size <= n:
        size = min(cap, max(n, 2 * _log_factorial.size)) + 1
        table = gammaln(np.arange(size, dtype=float) + 1.0)
        table.setflags(write=False)
        _log_factorial = table
    return _log_factorial


def _matrix(C):
    return check_confusion(np.asarray(C) if isinstance(C, ConfusionMatrix) else C)


def _entropy(p_counts, n):
    p = p_counts[p_counts > 0] / n
    return -math.fsum(p * np.log(p))


def _mi(c):
    n = c.sum()
    r = c.sum(axis=1)
    col = c.sum(axis=0)
    i, j = np.nonzero(c)
    v = c[i, j]
    return math.fsum((v / n) * np.log(n * v / (r[i] * col[j])))


def mi(C):
    """Mutual information of the joint distribution ``C / n``."""
    return _mi(_matrix(C))


def _nmi(c):
    n = c.sum()
    h = 0.5 * (_entropy(c.sum(axis=1), n) + _entropy(c.sum(axis=0), n))
    if h <= 0:
        raise UndefinedIndexError("NMI needs at least two nonempty clusters")
    return _mi(c) / h


def nmi(C):
    """MI divided by the arithmetic mean of the two marginal entropies."""
    return _nmi(_matrix(C))


def ncmi(C):
    """NMI of the row-normalised matrix (corrected for cluster sizes)."""
    c = _matrix(C)
    return _nmi(c / c.sum(axis=1, keepdims=True))


# Largest (rows x cols x support) grid evaluated in one vectorised pass.
_GRID_LIMIT = 2_000_000


@lru_cache(maxsize=4096)
def _expected_mi_cached(rows, cols):
    n = sum(rows)
    lf = log_factorial_table(n)
    a = np.array([x for x in rows if x > 0], dtype=np.int64)[:, None, None]
    b = np.array([x for x in cols if x > 0], dtype=np.int64)[None, :, None]
    support = int(min(a.max(), b.max()))
    if a.size * b.size * support <= _GRID_LIMIT:
        ell = np.arange(1, support + 1, dtype=np.int64)[None, None, :]
        lo = np.maximum(1, a + b - n)
        hi = np.minimum(a, b)
        mask = (ell >= lo) & (ell <= hi)
        # clip so that masked-out cells index the table safely
        e = np.where(mask, ell, 1)
        am = np.where(mask, a - e, 0)
        bm = np.where(mask, b - e, 0)
        rest = np.where(mask, n - a - b + e, 0)
        log_p = (lf[a] + lf[b] + lf[n - a] + lf[n - b] - lf[n]
                 - lf[e] - lf[am] - lf[bm] - lf[rest])
        log_p = np.where(mask, log_p, -np.inf)
        terms = (e / n) * np.log(n * e / (a * b)) * np.exp(log_p)
        return math.fsum(terms[mask])
    terms = []
    for ai in a.ravel().tolist():
        for bj in b.ravel().tolist():
            lo = max(1, ai + bj - n)
            hi = min(ai, bj)
            if lo > hi:
                continue
            ell = np.arange(lo, hi + 1)
            log_p = (lf[ai] + lf[bj] + lf[n - ai] + lf[n - bj] - lf[n]
                     - lf[ell] - lf[ai - ell] - lf[bj - ell] - lf[n - ai - bj + ell])
            terms.append((ell / n) * np.log(n * ell / (ai * bj)) * np.exp(log_p))
    if not terms:
        return 0.0
    return math.fsum(np.concatenate(terms))


def expected_mi(C):
    """Expected MI under the hypergeometric model with the margins of `C`.

    Sums, for each cell, over the support of the hypergeometric
    distribution of the cell count; ``l = 0`` terms vanish.
    """
    c = check_integer(_matrix(C), "expected_mi").astype(np.int64)
    rows = tuple(sorted(c.sum(axis=1).tolist()))
    cols = tuple(sorted(c.sum(axis=0).tolist()))
    return _expected_mi_cached(rows, cols)


def ami(C):
    """Adjusted mutual information (sum-normalised variant)."""
    c = check_integer(_matrix(C), "AMI")
    n = c.sum()
    h = 0.5 * (_entropy(c.sum(axis=1), n) + _entropy(c.sum(axis=0), n))
    emi = expected_mi(c)
    den = h - emi
    if abs(den) <= 1e-15 * max(h, 1.0):
        raise UndefinedIndexError("AMI denominator vanishes")
    return (_mi(c) - emi) / den
