"""Confusion matrices, label vectors, and the matrix transforms used
throughout the package.

Rows of a confusion matrix index the reference clusters, columns the
predicted ones. Permutations are 0-based index arrays.
"""

import io
from dataclasses import dataclass

import numpy as np

from ._validation import check_confusion, check_positive, is_integer_matrix

MARGIN_RTOL = 1e-12


@dataclass(frozen=True)
class LabelVector:
    """Cluster memberships of ``n`` points, canonicalised to ``1..k``."""

    labels: tuple
    k: int

    @property
    def n(self):
        return len(self.labels)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.labels, dtype=dtype if dtype is not None else int)

    def __len__(self):
        return len(self.labels)


class ConfusionMatrix:
    """An admissible ``k x k'`` confusion matrix with cached margins.

    Entries are nonnegative reals and every row sum is positive; columns
    may be empty. Instances are immutable: the stored array is read-only
    and every transform returns a new object.

    Parameters
    ----------
    entries : array-like of shape (k, k')
        Counts (or weights) ``c[i, j]``.
    """

    __slots__ = ("_c", "_row_sums", "_col_sums", "_n")

    def __init__(self, entries):
        c = check_confusion(entries).copy()
        c.setflags(write=False)
        self._c = c
        self._row_sums = c.sum(axis=1)
        self._col_sums = c.sum(axis=0)
        self._row_sums.setflags(write=False)
        self._col_sums.setflags(write=False)
        self._n = float(self._row_sums.sum())

    @property
    def entries(self):
        return self._c

    @property
    def row_sums(self):
        return self._row_sums

    @property
    def col_sums(self):
        return self._col_sums

    @property
    def n(self):
        return self._n

    @property
    def k(self):
        return self._c.shape[0]

    @property
    def k_pred(self):
        return self._c.shape[1]

    @property
    def shape(self):
        return self._c.shape

    @property
    def is_square(self):
        return self._c.shape[0] == self._c.shape[1]

    @property
    def is_integer(self):
        return is_integer_matrix(self._c)

    @property
    def T(self):
        return ConfusionMatrix(self._c.T)

    def __array__(self, dtype=None, copy=None):
        if dtype is not None and dtype != self._c.dtype:
            return self._c.astype(dtype)
        return self._c.copy() if copy else self._c

    def __eq__(self, other):
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._c, other._c))

    def __hash__(self):
        return hash((self.shape, self._c.tobytes()))

    def __repr__(self):
        return f"ConfusionMatrix({self._c.tolist()!r})"

    def check_margins(self, rtol=MARGIN_RTOL):
        """Recompute margins and compare them with the cached values."""
        ok_rows = np.allclose(self._c.sum(axis=1), self._row_sums, rtol=rtol, atol=0)
        ok_cols = np.allclose(self._c.sum(axis=0), self._col_sums, rtol=rtol, atol=0)
        return bool(ok_rows and ok_cols and np.isclose(self._c.sum(), self._n, rtol=rtol, atol=0))


def as_confusion(C):
    """Return `C` as a :class:`ConfusionMatrix` (no copy if it already is one)."""
    if isinstance(C, ConfusionMatrix):
        return C
    return ConfusionMatrix(C)


def canonicalize_labels(raw):
    """Map arbitrary label tokens to ``1..k`` in ascending sorted token order.

    Returns
    -------
    labels : LabelVector
    mapping : dict
        Original token -> canonical id.
    """
    raw = list(raw)
    if not raw:
        raise ValueError("label sequence is empty")
    try:
        tokens = sorted(set(raw))
    except TypeError:
        tokens = sorted(set(raw), key=lambda t: (type(t).__name__, str(t)))
    mapping = {t: i + 1 for i, t in enumerate(tokens)}
    return LabelVector(tuple(mapping[t] for t in raw), len(tokens)), mapping


def _as_label_vector(y):
    if isinstance(y, LabelVector):
        return y
    return canonicalize_labels(y)[0]


def confusion_from_labels(y_true, y_pred, k_pred=None):
    """Confusion matrix ``c[i, j] = #{u : y_true[u] = i and y_pred[u] = j}``.

    Raw label sequences are canonicalised first; :class:`LabelVector`
    inputs are used as is, so a predicted vector may leave some ids in
    ``1..k'`` unused (empty predicted clusters become zero columns).

    Parameters
    ----------
    y_true, y_pred : LabelVector or sequence
    k_pred : int, optional
        Pad the result to this many columns.
    """
    yt = _as_label_vector(y_true)
    yp = _as_label_vector(y_pred)
    if yt.n != yp.n:
        raise ValueError(f"label vectors differ in length: {yt.n} != {yp.n}")
    t = np.asarray(yt.labels, dtype=np.intp) - 1
    p = np.asarray(yp.labels, dtype=np.intp) - 1
    kp = yp.k if k_pred is None else int(k_pred)
    if p.max() >= kp:
        raise ValueError(f"predicted labels exceed k_pred={kp}")
    C = np.zeros((yt.k, kp), dtype=float)
    np.add.at(C, (t, p), 1.0)
    if np.any(C.sum(axis=1) == 0):
        raise ValueError("reference labelling has an empty cluster")
    return ConfusionMatrix(C)


def scale(C, s):
    """Return ``s * C`` for ``s > 0``."""
    s = float(check_positive(s))
    return ConfusionMatrix(np.asarray(as_confusion(C)) * s)


def scale_rows(C, s):
    """Return ``diag(s) @ C``, i.e. row ``i`` multiplied by ``s[i]``."""
    C = as_confusion(C)
    s = check_positive(s)
    if s.shape != (C.k,):
        raise ValueError(f"need {C.k} row scales, got shape {s.shape}")
    return ConfusionMatrix(np.asarray(C) * s[:, None])


def normalize_rows(C):
    """Row-normalise `C` so that every reference cluster has unit mass."""
    C = as_confusion(C)
    return scale_rows(C, 1.0 / C.row_sums)


def check_permutation(sigma, k):
    sigma = np.asarray(sigma)
    if sigma.shape != (k,) or not np.array_equal(np.sort(sigma), np.arange(k)):
        raise ValueError(f"not a permutation of 0..{k - 1}: {sigma.tolist()}")
    return sigma.astype(np.intp)


def permute(C, sigma, axis="cols"):
    """Rearrange rows or columns: new row/column ``j`` is old ``sigma[j]``."""
    C = as_confusion(C)
    c = np.asarray(C)
    if axis in ("rows", 0):
        return ConfusionMatrix(c[check_permutation(sigma, c.shape[0]), :])
    if axis in ("cols", 1):
        return ConfusionMatrix(c[:, check_permutation(sigma, c.shape[1])])
    raise ValueError(f"axis must be 'rows' or 'cols', got {axis!r}")


def _check_sizes(s):
    s = check_positive(np.atleast_1d(np.asarray(s, dtype=float)), name="row sums")
    if s.ndim != 1 or s.size < 2:
        raise ValueError("at least k=2 row sums are required")
    return s


def uniform_matrix(s):
    """The uniform-assignment matrix: entry ``(i, j)`` equals ``s[i] / k``."""
    s = _check_sizes(s)
    k = s.size
    return ConfusionMatrix(np.repeat(s[:, None] / k, k, axis=1))


def one_column_matrix(s):
    """All points in the first predicted cluster: first column ``s``, rest 0."""
    s = _check_sizes(s)
    C = np.zeros((s.size, s.size))
    C[:, 0] = s
    return ConfusionMatrix(C)


def perfect_matrix(s, sigma=None):
    """``P_sigma @ diag(s)``; the identity permutation by default."""
    s = _check_sizes(s)
    C = np.diag(s)
    if sigma is not None:
        C = C[check_permutation(sigma, s.size), :]
    return ConfusionMatrix(C)


def block_diagonal(sizes, values=1.0):
    """Block-diagonal matrix with constant blocks.

    Parameters
    ----------
    sizes : sequence of int
        Block sizes ``m_1, ..., m_l``; ``k = sum(sizes)``.
    values : float or sequence of float
        Entry value inside each block.
    """
    sizes = [int(m) for m in sizes]
    if not sizes or any(m < 1 for m in sizes):
        raise ValueError("block sizes must be positive integers")
    values = np.broadcast_to(np.asarray(values, dtype=float), (len(sizes),))
    check_positive(values, name="block values")
    k = sum(sizes)
    C = np.zeros((k, k))
    start = 0
    for m, v in zip(sizes, values):
        C[start:start + m, start:start + m] = v
        start += m
    return ConfusionMatrix(C)


def is_diagonally_max_dominant(C):
    """True iff every diagonal entry is a maximum of its row."""
    c = np.asarray(as_confusion(C))
    if c.shape[0] != c.shape[1]:
        raise ValueError("diagonal max-dominance needs a square matrix")
    return bool(np.all(np.diag(c) >= c.max(axis=1)))


def dmd_leq(C, D):
    """The DMD partial order: equal row sums, both diagonally
    max-dominant, and ``C[i, i] <= D[i, i]`` for all ``i``."""
    C, D = as_confusion(C), as_confusion(D)
    if C.shape != D.shape:
        return False
    if not (is_diagonally_max_dominant(C) and is_diagonally_max_dominant(D)):
        return False
    if not np.allclose(C.row_sums, D.row_sums, rtol=MARGIN_RTOL, atol=0):
        return False
    return bool(np.all(np.diag(np.asarray(C)) <= np.diag(np.asarray(D))))


def transfer(C, i, j, t=1.0):
    """Move mass ``t`` from cell ``(i, j)`` to the diagonal cell ``(i, i)``."""
    c = np.array(as_confusion(C), dtype=float)
    if i == j:
        raise ValueError("source and target cells coincide")
    if c[i, j] < t:
        raise ValueError(f"cannot move {t} out of cell ({i}, {j}) holding {c[i, j]}")
    c[i, i] += t
    c[i, j] -= t
    return ConfusionMatrix(c)


def move_points(C, i, j_from, j_to, t=1.0):
    """Move mass ``t`` within row ``i`` from column ``j_from`` to ``j_to``."""
    c = np.array(as_confusion(C), dtype=float)
    if c[i, j_from] < t:
        raise ValueError(f"cannot move {t} out of cell ({i}, {j_from}) holding {c[i, j_from]}")
    c[i, j_from] -= t
    c[i, j_to] += t
    return ConfusionMatrix(c)


# file formats -------------------------------------------------------------

def parse_labels(text):
    """Tokens from a label file: whitespace separated, ``#`` lines ignored."""
    tokens = []
    for line in text.splitlines():
        if line.lstrip().startswith("#"):
            continue
        tokens.extend(line.split())
    if not tokens:
        raise ValueError("no labels found")
    return [_maybe_int(t) for t in tokens]


def _maybe_int(token):
    try:
        return int(token)
    except ValueError:
        return token


def parse_matrix(text):
    """A CSV of numeric rows, no header."""
    rows = []
    for line in io.StringIO(text):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(x) for x in line.split(",")])
        except ValueError as e:
            raise ValueError(f"malformed matrix row: {line!r}") from e
    if not rows or len({len(r) for r in rows}) != 1:
        raise ValueError("matrix CSV must contain rows of equal length")
    return ConfusionMatrix(np.array(rows))
