"""Correlations between score vectors, cluster-size inequality and
median-based rankings of algorithms over benchmark score tables."""

import csv
import io
import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np


class UndefinedCorrelationError(ValueError):
    """Raised when a correlation coefficient is undefined (constant input)."""


def _pair(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError("x and y must be 1D sequences of equal length")
    if x.size < 2:
        raise ValueError("need at least two observations")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("inputs must be finite")
    return x, y


def pearson(x, y):
    """Pearson's product-moment correlation coefficient."""
    x, y = _pair(x, y)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = math.fsum(dx * dx)
    syy = math.fsum(dy * dy)
    if sxx == 0 or syy == 0:
        raise UndefinedCorrelationError("correlation of a constant vector is undefined")
    r = math.fsum(dx * dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def midranks(x):
    """Ranks 1..n, tied values sharing the mean of their positions."""
    x = np.asarray(x, dtype=float)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(x.size)
    xs = x[order]
    i = 0
    while i < x.size:
        j = i
        while j + 1 < x.size and xs[j + 1] == xs[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(x, y):
    """Spearman's rho: Pearson's r of the midranks."""
    x, y = _pair(x, y)
    return pearson(midranks(x), midranks(y))


def kendall_tau(x, y):
    """Kendall's tau-b, corrected for ties in either vector.

    ``(P - Q) / sqrt((P + Q + T_x) (P + Q + T_y))`` where ``T_x`` counts
    pairs tied only in ``x``. Pairs tied in both are ignored.
    """
    x, y = _pair(x, y)
    sx = np.sign(x[:, None] - x[None, :])
    sy = np.sign(y[:, None] - y[None, :])
    iu = np.triu_indices(x.size, 1)
    sx, sy = sx[iu], sy[iu]
    prod = sx * sy
    concordant = int(np.sum(prod > 0))
    discordant = int(np.sum(prod < 0))
    tie_x_only = int(np.sum((sx == 0) & (sy != 0)))
    tie_y_only = int(np.sum((sy == 0) & (sx != 0)))
    den = (concordant + discordant + tie_y_only) * (concordant + discordant + tie_x_only)
    if den == 0:
        raise UndefinedCorrelationError("Kendall's tau is undefined for a constant vector")
    return (concordant - discordant) / math.sqrt(den)


def gini(sizes):
    """Gini index of cluster sizes, ``sum_ij |s_i - s_j| / (2 m sum(s))``.

    0 for equal sizes; approaches ``1 - 1/m`` when one cluster holds
    almost every point.
    """
    s = np.asarray(sizes, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise ValueError("sizes must be a nonempty 1D sequence")
    if np.any(s <= 0):
        raise ValueError("sizes must be positive")
    return float(np.abs(s[:, None] - s[None, :]).sum() / (2 * s.size * s.sum()))


@dataclass(frozen=True)
class RankedAlgorithm:
    rank: int
    algorithm: str
    median: float


def median_ranking(scores):
    """Rank algorithms by their median best score over datasets.

    Parameters
    ----------
    scores : iterable of (algorithm, dataset, labelling, score)
        One row per reference labelling of each dataset.

    Returns
    -------
    list of RankedAlgorithm
        Sorted by decreasing median; tied medians share the smaller
        (competition) rank, ties listed by algorithm name.
    """
    best = defaultdict(dict)
    datasets = set()
    for algorithm, dataset, _labelling, score in scores:
        score = float(score)
        if math.isnan(score):
            raise ValueError(f"missing score for {algorithm!r} on {dataset!r}")
        datasets.add(dataset)
        prev = best[algorithm].get(dataset)
        best[algorithm][dataset] = score if prev is None else max(prev, score)
    if not best:
        return []
    for algorithm, per_dataset in best.items():
        missing = datasets - per_dataset.keys()
        if missing:
            raise ValueError(f"ragged table: {algorithm!r} has no score on {sorted(missing)}")
    medians = {a: float(np.median(list(d.values()))) for a, d in best.items()}
    order = sorted(medians, key=lambda a: (-medians[a], a))
    out = []
    for pos, a in enumerate(order):
        if pos and medians[a] == out[-1].median:
            rank = out[-1].rank
        else:
            rank = pos + 1
        out.append(RankedAlgorithm(rank, a, medians[a]))
    return out


SCORE_COLUMNS = ("algorithm", "dataset", "labelling", "score")


def read_score_table(text):
    """Parse a CSV score table with a header naming
    ``algorithm, dataset, labelling, score``."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or not set(SCORE_COLUMNS) <= set(reader.fieldnames):
        raise ValueError(f"score table needs columns {', '.join(SCORE_COLUMNS)}")
    rows = []
    for line, rec in enumerate(reader, start=2):
        try:
            score = float(rec["score"])
        except (TypeError, ValueError):
            raise ValueError(f"line {line}: bad score {rec['score']!r}") from None
        rows.append((rec["algorithm"], rec["dataset"], rec["labelling"], score))
    return rows


def ranking_to_csv(ranking):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rank", "algorithm", "median"])
    for r in ranking:
        w.writerow([r.rank, r.algorithm, f"{r.median:.12g}"])
    return buf.getvalue()
