"""Random confusion matrices and the Monte Carlo experiment drivers.

Every driver derives one independent generator per sample from
``(seed, sample_index)``, so results do not depend on evaluation order.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import UndefinedIndexError
from .core import ConfusionMatrix, is_diagonally_max_dominant, one_column_matrix
from .indices import compute

DMD_MAX_ATTEMPTS = 100


def sample_rng(seed, index):
    """Generator for sample `index` of a run seeded with `seed`."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def _as_rng(rng_seed):
    if isinstance(rng_seed, np.random.Generator):
        return rng_seed
    return np.random.default_rng(rng_seed)


def _int_margins(values, name):
    arr = np.asarray(values)
    out = np.rint(arr).astype(np.int64)
    if out.ndim != 1 or not np.array_equal(out, arr) or np.any(out < 0):
        raise ValueError(f"{name} must be a 1D sequence of nonnegative integers")
    return out


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int
    undefined: int = 0


@dataclass(frozen=True)
class TrajectoryStep:
    step: int
    phase: int
    matrix: ConfusionMatrix
    values: dict = field(default_factory=dict)


def hypergeometric_sample(row_sums, col_sums, rng_seed=None):
    """A contingency table drawn from the fixed-margins permutation model.

    The reference labels are fixed and the multiset of predicted labels
    is shuffled uniformly, so both margins are reproduced exactly.
    """
    s = _int_margins(row_sums, "row sums")
    t = _int_margins(col_sums, "column sums")
    if s.sum() != t.sum():
        raise ValueError(f"margin totals differ: {s.sum()} != {t.sum()}")
    if np.any(s == 0):
        raise ValueError("row sums must be positive")
    rng = _as_rng(rng_seed)
    truth = np.repeat(np.arange(s.size), s)
    pred = rng.permutation(np.repeat(np.arange(t.size), t))
    C = np.zeros((s.size, t.size))
    np.add.at(C, (truth, pred), 1.0)
    return ConfusionMatrix(C)


def dmd_sample(row_sums, rng_seed=None, max_attempts=DMD_MAX_ATTEMPTS):
    """A random diagonally max-dominant matrix with positive integer entries.

    Row ``i``: draw ``u ~ Dir(1, ..., 1)``, set ``c[i, j] = max(1, floor(u[j] s[i]))``
    for ``j >= 2`` and ``c[i, 1]`` to the remainder, then swap the row
    maximum onto the diagonal. Rows whose remainder falls below 1 are
    redrawn.
    """
    s = _int_margins(row_sums, "row sums")
    k = s.size
    if k < 2 or np.any(s < 2 * k):
        raise ValueError(f"need k >= 2 and every row sum >= 2k = {2 * k}")
    rng = _as_rng(rng_seed)
    C = np.zeros((k, k))
    for i in range(k):
        for _ in range(max_attempts):
            e = rng.exponential(size=k)
            u = e / e.sum()
            row = np.maximum(1.0, np.floor(u * s[i]))
            row[0] = s[i] - row[1:].sum()
            if row[0] >= 1:
                break
        else:
            raise ValueError(f"row {i}: no valid draw in {max_attempts} attempts")
        j = int(np.argmax(row))
        row[i], row[j] = row[j], row[i]
        C[i] = row
    return ConfusionMatrix(C)


def _safe_compute(index_id, C):
    try:
        return compute(index_id, C)
    except UndefinedIndexError:
        return None


def monte_carlo_expectation(index_id, row_sums, col_sums, samples=1000, seed=0):
    """Mean and standard error of an index over hypergeometric samples.

    Samples on which the index is undefined are excluded and counted.
    """
    values = []
    undefined = 0
    for b in range(samples):
        v = _safe_compute(index_id, hypergeometric_sample(row_sums, col_sums, sample_rng(seed, b)))
        if v is None:
            undefined += 1
        else:
            values.append(v)
    return _estimate(values, seed, undefined)


def _estimate(values, seed, undefined=0):
    m = len(values)
    if m == 0:
        return MonteCarloEstimate(math.nan, math.nan, 0, seed, undefined)
    arr = np.asarray(values, dtype=float)
    se = float(arr.std(ddof=1) / math.sqrt(m)) if m > 1 else math.nan
    return MonteCarloEstimate(math.fsum(arr) / m, se, m, seed, undefined)


def expectation_curve(index_ids, ks, points_per_k=lambda k: 100 * k * k, samples=1000, seed=0):
    """Expected index values under the hypergeometric model with equal
    reference and predicted cluster sizes, as a function of ``k``.

    Returns a list of ``(k, n, {index_id: MonteCarloEstimate})``. The same
    tables are shared by all indices for a given ``k``.
    """
    out = []
    for k in ks:
        n = int(points_per_k(k))
        if n % k:
            raise ValueError(f"n={n} is not divisible by k={k}")
        sizes = [n // k] * k
        values = {i: [] for i in index_ids}
        undefined = {i: 0 for i in index_ids}
        for b in range(samples):
            C = hypergeometric_sample(sizes, sizes, sample_rng(seed + k, b))
            for i in index_ids:
                v = _safe_compute(i, C)
                if v is None:
                    undefined[i] += 1
                else:
                    values[i].append(v)
        out.append((k, n, {i: _estimate(values[i], seed + k, undefined[i]) for i in index_ids}))
    return out


@dataclass
class MonotonicityResult:
    increments: dict
    skipped: int
    samples: int


def monotonicity_experiment(index_ids, row_sums, samples=10000, seed=0, row=0, col=1):
    """Index responses to a one-point improvement of random DMD matrices.

    For each sample ``C`` from :func:`dmd_sample`, ``C'`` moves one point of
    reference cluster `row` from predicted cluster `col` to the matching
    cluster ``row``; ``I(C') - I(C)`` is recorded per index. Samples where
    the move is impossible are skipped and counted.
    """
    inc = {i: [] for i in index_ids}
    skipped = 0
    for b in range(samples):
        C = dmd_sample(row_sums, sample_rng(seed, b))
        c = np.array(C)
        if c[row, col] < 1:
            skipped += 1
            continue
        c[row, row] += 1
        c[row, col] -= 1
        D = ConfusionMatrix(c)
        if not is_diagonally_max_dominant(D):
            skipped += 1
            continue
        for i in index_ids:
            before, after = _safe_compute(i, C), _safe_compute(i, D)
            if before is not None and after is not None:
                inc[i].append(after - before)
    return MonotonicityResult({i: np.asarray(v) for i, v in inc.items()}, skipped, samples)


@dataclass(frozen=True)
class Phase:
    """A block of single-point moves ``(row, from_col, to_col, count)``."""

    label: str
    moves: tuple = ()


# From one predicted cluster through the perfect match to the uniform
# assignment. Within a phase, moves run in the listed order.
EXAMPLE_K2 = (
    (54, 54),
    (
        Phase("all points in one cluster"),
        Phase("cluster 2 moves to its own group", ((1, 0, 1, 54),)),
        Phase("perfect match"),
        Phase("13 points of cluster 2 move back", ((1, 1, 0, 13),)),
        Phase("cluster 1 spread uniformly", ((0, 0, 1, 27),)),
        Phase("cluster 2 spread uniformly", ((1, 1, 0, 14),)),
    ),
)

EXAMPLE_K3 = (
    (24, 24, 24),
    (
        Phase("all points in one cluster"),
        Phase("cluster 3 moves to its own group", ((2, 0, 2, 24),)),
        Phase("cluster 2 moves to its own group", ((1, 0, 1, 24),)),
        Phase("12 points of cluster 1 move to cluster 2", ((0, 0, 1, 12),)),
        Phase("12 points of cluster 2 move to cluster 1", ((1, 1, 0, 12),)),
        Phase("cluster 1 spread uniformly", ((0, 0, 2, 4), (0, 1, 2, 4))),
        Phase("cluster 2 spread uniformly", ((1, 0, 2, 4), (1, 1, 2, 4))),
        Phase("cluster 3 spread uniformly", ((2, 2, 0, 8), (2, 2, 1, 8))),
    ),
)

BUILTIN_SCHEDULES = {2: EXAMPLE_K2, 3: EXAMPLE_K3}


def trajectory(row_sums, schedule, index_ids=()):
    """Apply a schedule of single-point moves starting from the
    one-cluster matrix, evaluating `index_ids` after every move.

    Step 0 is the starting matrix and carries phase 0.
    """
    c = np.array(one_column_matrix(row_sums))
    steps = []

    def record(phase):
        M = ConfusionMatrix(c)
        values = {i: _safe_compute(i, M) for i in index_ids}
        steps.append(TrajectoryStep(len(steps), phase, M, values))

    record(0)
    for p, phase in enumerate(schedule):
        for r, src, dst, count in phase.moves:
            for _ in range(count):
                if c[r, src] < 1:
                    raise ValueError(f"phase {p}: cell ({r}, {src}) is empty")
                c[r, src] -= 1
                c[r, dst] += 1
                record(p)
    return steps


def enumerate_tables(row_sums, col_sums):
    """Every contingency table with the given margins and its probability
    under the fixed-margins model.

    Yields ``(ConfusionMatrix, probability)``. Exponential in the table
    size; meant for tiny margins.
    """
    s = _int_margins(row_sums, "row sums")
    t = _int_margins(col_sums, "column sums")
    if s.sum() != t.sum():
        raise ValueError("margin totals differ")
    n = int(s.sum())
    k, kp = s.size, t.size
    log_const = (sum(math.lgamma(a + 1) for a in s) + sum(math.lgamma(b + 1) for b in t)
                 - math.lgamma(n + 1))

    def rows_from(i, remaining):
        if i == k - 1:
            yield [list(remaining)]
            return
        for row in _compositions(int(s[i]), remaining):
            rest = [r - x for r, x in zip(remaining, row)]
            for tail in rows_from(i + 1, rest):
                yield [row] + tail

    for table in rows_from(0, [int(b) for b in t]):
        c = np.array(table, dtype=float)
        logp = log_const - sum(math.lgamma(x + 1) for x in c.ravel())
        yield ConfusionMatrix(c), math.exp(logp)


def _compositions(total, caps):
    """Vectors ``x`` with ``0 <= x[j] <= caps[j]`` summing to `total`."""
    if len(caps) == 1:
        if total <= caps[0]:
            yield [total]
        return
    rest_cap = sum(caps[1:])
    for x in range(max(0, total - rest_cap), min(total, caps[0]) + 1):
        for tail in _compositions(total - x, caps[1:]):
            yield [x] + tail


def exact_expectation(index_id, row_sums, col_sums):
    """Exact expected index value under the fixed-margins model, by
    enumerating every table. Raises if the index is undefined on any."""
    return math.fsum(p * compute(index_id, C) for C, p in enumerate_tables(row_sums, col_sums))
