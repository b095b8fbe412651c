"""Indices based on counting concordant and discordant point pairs.

R, FM, AR and AFM are defined for integer confusion matrices; they are
evaluated in exact integer arithmetic and rounded once at the end. Their
primed counterparts replace ``binom(x, 2)`` by ``x**2 / 2`` and accept
any admissible real matrix.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._validation import UndefinedIndexError, check_confusion, check_integer
from .core import ConfusionMatrix


@dataclass(frozen=True)
class PairCounts:
    """Pairs grouped together in both partitions (``yy``), apart in both
    (``nn``), together only in the prediction (``ny``) and together only
    in the reference (``yn``)."""

    yy: float
    nn: float
    ny: float
    yn: float

    @property
    def total(self):
        return self.yy + self.nn + self.ny + self.yn


def _binom2(x):
    return x * (x - 1) // 2


def _binom2_real(x):
    return x * (x - 1.0) / 2.0


def _matrix(C):
    return check_confusion(np.asarray(C) if isinstance(C, ConfusionMatrix) else C)


def _integer_sums(C, name):
    """``(sum binom(c_ij, 2), sum binom(r_i, 2), sum binom(c_j, 2), binom(n, 2))``
    as Python ints."""
    c = check_integer(_matrix(C), name).astype(np.int64)
    cells = c.ravel().tolist()
    rows = c.sum(axis=1).tolist()
    cols = c.sum(axis=0).tolist()
    n = sum(rows)
    return (sum(_binom2(x) for x in cells), sum(_binom2(x) for x in rows),
            sum(_binom2(x) for x in cols), _binom2(n))


def _real_sums(C):
    c = _matrix(C)
    r = c.sum(axis=1)
    col = c.sum(axis=0)
    return (math.fsum(_binom2_real(c.ravel())), math.fsum(_binom2_real(r)),
            math.fsum(_binom2_real(col)), _binom2_real(math.fsum(r)))


def _sums(C, name, generalized):
    if generalized:
        return _real_sums(C)
    return _integer_sums(C, name)


def pair_counts(C):
    """Concordant/discordant pair counts of an integer confusion matrix."""
    yy, rows, cols, total = _integer_sums(C, "pair_counts")
    ny = cols - yy  # same predicted cluster, different reference clusters
    yn = rows - yy
    return PairCounts(yy, total - yy - ny - yn, ny, yn)


def rand_index(C, generalized=False):
    """Rand index: the fraction of concordant pairs.

    With ``generalized=True`` real matrices are accepted and ``binom(x, 2)``
    is taken as ``x (x - 1) / 2``; values may then leave ``[0, 1]``.
    """
    yy, rows, cols, total = _sums(C, "R", generalized)
    if total == 0:
        raise UndefinedIndexError("R needs at least two points")
    return (total - rows - cols + 2 * yy) / total


def fowlkes_mallows(C, generalized=False):
    """Fowlkes-Mallows index: the geometric mean of pair precision and recall."""
    yy, rows, cols, _ = _sums(C, "FM", generalized)
    if rows * cols <= 0:
        raise UndefinedIndexError("FM denominator vanishes")
    return yy / math.sqrt(rows * cols)


def adjusted_rand(C):
    """Hubert-Arabie adjusted Rand index (integer matrices)."""
    yy, rows, cols, total = _integer_sums(C, "AR")
    num = 2 * (total * yy - rows * cols)
    den = total * (rows + cols) - 2 * rows * cols
    if den == 0:
        raise UndefinedIndexError("AR denominator vanishes")
    return num / den


def adjusted_fowlkes_mallows(C):
    """FM adjusted for chance under the hypergeometric model (integer matrices)."""
    yy, rows, cols, total = _integer_sums(C, "AFM")
    num = total * yy - rows * cols
    prod = rows * cols
    # total*sqrt(prod) - prod, written without cancellation
    gap = total * total - prod
    if prod == 0 or gap == 0:
        raise UndefinedIndexError("AFM denominator vanishes")
    q = math.sqrt(prod)
    den = q * gap / (total + q)
    return num / den


def _square_sums(C):
    c = _matrix(C)
    r = c.sum(axis=1)
    col = c.sum(axis=0)
    n = math.fsum(r)
    return math.fsum((c * c).ravel()), math.fsum(r * r), math.fsum(col * col), n


def rand_prime(C):
    """Scale-invariant limit of R: ``lim R(sC)`` as ``s`` grows."""
    sq, r2, c2, n = _square_sums(C)
    return 1.0 - (r2 + c2 - 2.0 * sq) / (n * n)


def fowlkes_mallows_prime(C):
    """Scale-invariant limit of FM."""
    sq, r2, c2, _ = _square_sums(C)
    return sq / math.sqrt(r2 * c2)


# Below this ratio of result to subtracted terms the float evaluation has
# lost more than about six digits and the exact path is used instead.
_CANCELLATION_RATIO = 1e-6


def _square_sums_exact(C):
    c = _matrix(C)
    cells = [Fraction(x) for x in c.ravel()]
    k, kp = c.shape
    r = [sum(cells[i * kp:(i + 1) * kp], Fraction(0)) for i in range(k)]
    col = [sum(cells[j::kp], Fraction(0)) for j in range(kp)]
    n = sum(r, Fraction(0))
    return (sum((x * x for x in cells), Fraction(0)), sum((x * x for x in r), Fraction(0)),
            sum((x * x for x in col), Fraction(0)), n)


def _needs_exact(num, den, e):
    return abs(num) < _CANCELLATION_RATIO * e or abs(den) < _CANCELLATION_RATIO * e


def normalized_rand_prime(C):
    """NR': the limit of AR(sC); equals Morey and Agresti's adjustment."""
    sq, r2, c2, n = _square_sums(C)
    e = r2 * c2 / (n * n)
    num, den = sq - e, 0.5 * (r2 + c2) - e
    if _needs_exact(num, den, e):
        sq, r2, c2, n = _square_sums_exact(C)
        e = r2 * c2 / (n * n)
        num, den = sq - e, (r2 + c2) / 2 - e
    if den <= 0:
        raise UndefinedIndexError("NR' denominator vanishes")
    return float(num / den)


def normalized_fowlkes_mallows_prime(C):
    """NFM': the limit of AFM(sC)."""
    sq, r2, c2, n = _square_sums(C)
    e = r2 * c2 / (n * n)
    num, den = sq - e, math.sqrt(r2 * c2) - e
    if _needs_exact(num, den, e):
        sq, r2, c2, n = _square_sums_exact(C)
        e = r2 * c2 / (n * n)
        num = sq - e
        # sqrt(a) - e == (a - e^2) / (sqrt(a) + e), free of cancellation
        a = r2 * c2
        den = (a - e * e) / (math.sqrt(a) + e)
    if den <= 0:
        raise UndefinedIndexError("NFM' denominator vanishes")
    return float(num / den)


def _row_normalized(C):
    c = _matrix(C)
    return c / c.sum(axis=1, keepdims=True)


def normalized_corrected_rand_prime(C):
    """NR' of the row-normalised matrix (corrected for cluster sizes)."""
    return normalized_rand_prime(_row_normalized(C))


def normalized_corrected_fowlkes_mallows_prime(C):
    """NFM' of the row-normalised matrix."""
    return normalized_fowlkes_mallows_prime(_row_normalized(C))
