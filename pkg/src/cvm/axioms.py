"""Randomised verification and refutation of index properties.

A ``"refuted"`` verdict carries a witness that reproduces the violation;
``"holds-on-trials"`` only means that no violation turned up in the
configured number of trials.

Properties
----------
PER  invariance to permuting rows or columns
SYM  ``I(C) == I(C.T)``
SU   ``I(sC) == I(C)`` for ``s > 0``
SC   ``I(diag(s) C) == I(C)`` for positive ``s``
B1   ``I <= 1``, with equality exactly at permuted diagonal matrices
E0   zero expectation under the fixed-margins (hypergeometric) model
U0   ``I == 0`` at the uniform-assignment matrix
O0   ``I == 0`` at the one-cluster matrix
B0   the minimum over matrices with given row sums is 0
MON  nondecreasing under single-point improvements of diagonally
     max-dominant matrices
"""

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from ._validation import UndefinedIndexError
from .core import one_column_matrix, uniform_matrix
from .indices import INDICES, TABLE_INDICES, get_index
from .randmodels import dmd_sample, exact_expectation, hypergeometric_sample, sample_rng

PROPERTIES = ("PER", "SYM", "SU", "SC", "B1", "E0", "U0", "O0", "B0", "MON")

DEFAULT_TRIALS = 10_000
ALGEBRAIC_TOL = 1e-9
EXACT_TOL = 1e-12

HOLDS = "holds-on-trials"
REFUTED = "refuted"

# Known counterexamples tried before any random search.
WORKED = np.array([[50, 25, 25], [21, 40, 39], [39, 39, 22]], dtype=float)
OMEGA = np.array([[50, 25], [25, 0]], dtype=float)
AR_ZERO = np.array([[16, 15, 11], [9, 14, 7], [11, 10, 15]], dtype=float)
AR_NEGATIVE_U = np.array([[14, 14, 14], [10, 10, 10], [12, 12, 12]], dtype=float)
PERM_DIAG = np.array([[0, 0, 5], [3, 0, 0], [0, 1, 0]], dtype=float)
SEED_MATRICES = (WORKED, OMEGA, AR_ZERO, AR_NEGATIVE_U, PERM_DIAG)

# Small margins for exact expectations (every table enumerated).
E0_EXACT_MARGINS = (
    ((2, 2), (2, 2)),
    ((3, 2), (2, 3)),
    ((2, 2, 2), (2, 2, 2)),
    ((3, 2, 2), (3, 2, 2)),
    ((4, 3), (5, 2)),
)
# Margins for the Monte Carlo part of the E0 check.
E0_MC_MARGINS = ((12, 9, 7), (10, 10, 8))

# Row sums and the transfer used in the monotonicity search.
MON_ROW_SUMS = (100, 100, 100, 700)


@dataclass
class PropertyReport:
    index: str
    property: str
    verdict: str
    trials: int
    seed: int
    tol: float
    witness: object = None
    detail: str = ""
    strict: bool = None

    @property
    def holds(self):
        return self.verdict == HOLDS

    @property
    def symbol(self):
        return "+" if self.holds else "-"


class _Refuted(Exception):
    def __init__(self, witness, detail):
        super().__init__(detail)
        self.witness = witness
        self.detail = detail


def _eval(func, C):
    try:
        v = func(C)
    except UndefinedIndexError:
        return None
    return v


def _close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _random_matrix(rng, integer, k=None, positive_cols=False, k_max=6):
    if k is None:
        k = int(rng.integers(2, k_max + 1))
    while True:
        if integer:
            C = rng.integers(0, 21, size=(k, k)).astype(float)
        else:
            C = rng.uniform(0.0, 10.0, size=(k, k))
            C[rng.random((k, k)) < 0.25] = 0.0
        if np.all(C.sum(axis=1) > 0) and (not positive_cols or np.all(C.sum(axis=0) > 0)):
            if not integer or C.sum() >= 2:
                return C


def _random_sizes(rng, k, integer, multiple_of=1):
    if integer:
        return multiple_of * rng.integers(1, 40, size=k).astype(float)
    return rng.uniform(0.5, 50.0, size=k)


def _seed_matrices(integer):
    return [C for C in SEED_MATRICES if not integer or np.all(C == np.round(C))]


# per-property searches: each raises _Refuted or returns a detail string

def _check_invariance(func, integer, trials, seed, tol, transform, positive_cols=False):
    for C in _seed_matrices(integer):
        if positive_cols and np.any(C.sum(axis=0) == 0):
            continue
        _compare(func, C, transform(C, np.random.default_rng(seed)), tol)
    for t in range(trials):
        rng = sample_rng(seed, t)
        C = _random_matrix(rng, integer, positive_cols=positive_cols)
        _compare(func, C, transform(C, rng), tol)
    return f"{trials} random matrices"


def _compare(func, C, others, tol):
    base = _eval(func, C)
    if base is None:
        return
    for D in others:
        v = _eval(func, D)
        if v is not None and not _close(base, v, tol):
            raise _Refuted((C, D), f"I(C)={base:.12g} but I(C')={v:.12g}")


def _per_transform(C, rng):
    k = C.shape[0]
    return (C[rng.permutation(k), :], C[:, rng.permutation(k)])


def _sym_transform(C, rng):
    return (C.T.copy(),)


def _su_transform(integer):
    def f(C, rng):
        s = float(rng.integers(2, 6)) if integer else float(rng.uniform(0.05, 20.0))
        return (s * C,)
    return f


def _sc_transform(integer):
    def f(C, rng):
        k = C.shape[0]
        s = rng.integers(1, 6, size=k).astype(float) if integer else rng.uniform(0.05, 20.0, size=k)
        if np.all(s == s[0]):
            s[0] += 1.0
        return (s[:, None] * C,)
    return f


def _check_b1(func, integer, trials, seed, tol):
    for t in range(trials):
        rng = sample_rng(seed, t)
        k = int(rng.integers(2, 7))
        s = rng.integers(2, 40, size=k).astype(float) if integer else rng.uniform(0.5, 50.0, size=k)
        P = np.diag(s)[rng.permutation(k)]
        v = _eval(func, P)
        if v is not None and not _close(v, 1.0, tol):
            raise _Refuted(P, f"perfect match scores {v:.12g}, not 1")
        # move part of one row off its matched column
        i = int(rng.integers(k))
        j = int(np.nonzero(P[i])[0][0])
        j2 = int(rng.choice([c for c in range(k) if c != j]))
        m = float(rng.integers(1, int(P[i, j]))) if integer else P[i, j] * rng.uniform(0.05, 0.95)
        D = P.copy()
        D[i, j] -= m
        D[i, j2] += m
        v = _eval(func, D)
        if v is not None and v >= 1.0 - tol:
            raise _Refuted(D, f"imperfect match scores {v:.12g} >= 1")
        C = _random_matrix(rng, integer)
        v = _eval(func, C)
        if v is not None and v > 1.0 + tol:
            raise _Refuted(C, f"value {v:.12g} exceeds 1")
    return f"{trials} perfect/perturbed/random triples"


def _check_zero_at(func, integer, trials, seed, tol, builder, name):
    for t in range(trials):
        rng = sample_rng(seed, t)
        k = int(rng.integers(2, 11))
        s = _random_sizes(rng, k, integer, multiple_of=k if integer else 1)
        M = np.array(builder(s))
        v = _eval(func, M)
        if v is None:
            continue
        if abs(v) > tol:
            raise _Refuted(M, f"{name} matrix scores {v:.12g}")
    return f"{trials} random row-sum vectors"


def _check_e0(func, index_id, integer, trials, seed, tol):
    for rows, cols in E0_EXACT_MARGINS:
        try:
            e = exact_expectation(index_id, rows, cols)
        except UndefinedIndexError:
            continue
        if abs(e) > ALGEBRAIC_TOL:
            raise _Refuted((rows, cols), f"exact expectation {e:.12g} for margins {rows}/{cols}")
    rows, cols = E0_MC_MARGINS
    values = []
    for t in range(trials):
        v = _eval(func, np.array(hypergeometric_sample(rows, cols, sample_rng(seed, t))))
        if v is not None:
            values.append(v)
    arr = np.asarray(values)
    mean = math.fsum(arr) / arr.size
    se = arr.std(ddof=1) / math.sqrt(arr.size)
    if abs(mean) > 3 * se + tol:
        raise _Refuted((rows, cols), f"Monte Carlo mean {mean:.6g} exceeds 3 SE ({se:.3g})")
    return f"exact on {len(E0_EXACT_MARGINS)} margin pairs; MC mean {mean:.3g} +- {se:.2g}"


def _compositions_matrix(rng, s, integer):
    k = s.size
    if integer:
        return np.vstack([rng.multinomial(int(si), rng.dirichlet(np.ones(k))) for si in s]).astype(float)
    return s[:, None] * rng.dirichlet(np.ones(k), size=k)


def _check_b0(func, integer, trials, seed, tol):
    for C in _seed_matrices(integer):
        v = _eval(func, C)
        if v is not None and v < -tol:
            raise _Refuted(C, f"negative value {v:.12g}")
    configs = max(1, trials // 100)
    per_config = max(1, trials // configs)
    for cfg in range(configs):
        rng = sample_rng(seed, cfg)
        k = int(rng.integers(2, 7))
        s = _random_sizes(rng, k, integer, multiple_of=k if integer else 1)
        if integer:
            s = s + k  # keep clusters from being trivially small
        best, best_matrix = math.inf, None
        candidates = [np.array(uniform_matrix(s)), np.array(one_column_matrix(s))]
        for C in candidates:
            v = _eval(func, C)
            if v is not None and v < best:
                best, best_matrix = v, C
        for _ in range(per_config):
            C = _compositions_matrix(rng, s, integer)
            if np.any(C.sum(axis=1) <= 0):
                continue
            v = _eval(func, C)
            if v is None:
                continue
            if v < -tol:
                raise _Refuted(C, f"negative value {v:.12g}")
            if v < best:
                best, best_matrix = v, C
        if best > tol:
            raise _Refuted(best_matrix, f"smallest value found for row sums {s.tolist()} is {best:.12g} > 0")
    return f"{configs} row-sum vectors x {per_config} matrices"


def _mon_cases(trials, seed):
    # the fixed single-transfer setup first, then random shapes and transfers
    for t in range(trials):
        yield sample_rng(seed, t), MON_ROW_SUMS, 0, 1
    for t in range(trials // 4):
        rng = sample_rng(seed + 1, t)
        k = int(rng.integers(2, 6))
        s = rng.integers(2 * k, 200, size=k)
        i = int(rng.integers(k))
        j = int(rng.choice([c for c in range(k) if c != i]))
        yield rng, s, i, j


def _check_mon(func, trials, seed, tol):
    min_inc = math.inf
    for rng, s, i, j in _mon_cases(trials, seed):
        C = np.array(dmd_sample(s, rng))
        if C[i, j] < 1:
            continue
        D = C.copy()
        D[i, i] += 1
        D[i, j] -= 1
        a, b = _eval(func, C), _eval(func, D)
        if a is None or b is None:
            continue
        if b - a < -tol:
            raise _Refuted((C, D), f"improvement changes the value by {b - a:.6g}")
        min_inc = min(min_inc, b - a)
    return min_inc


def check_property(index_id, property_id, trials=DEFAULT_TRIALS, seed=0, tol=None):
    """Search for a violation of `property_id` by the index `index_id`."""
    if property_id not in PROPERTIES:
        raise ValueError(f"unknown property {property_id!r}")
    entry = get_index(index_id)
    func = entry.func
    integer = entry.integer_only
    if tol is None:
        tol = EXACT_TOL if property_id in ("U0", "O0") else ALGEBRAIC_TOL
    report = PropertyReport(index_id, property_id, HOLDS, trials, seed, tol)
    try:
        if property_id == "PER":
            report.detail = _check_invariance(func, integer, trials, seed, tol, _per_transform)
        elif property_id == "SYM":
            report.detail = _check_invariance(func, integer, trials, seed, tol, _sym_transform,
                                              positive_cols=True)
        elif property_id == "SU":
            report.detail = _check_invariance(func, integer, trials, seed, tol, _su_transform(integer))
        elif property_id == "SC":
            report.detail = _check_invariance(func, integer, trials, seed, tol, _sc_transform(integer))
        elif property_id == "B1":
            report.detail = _check_b1(func, integer, trials, seed, tol)
        elif property_id == "E0":
            report.detail = _check_e0(func, index_id, integer, trials, seed, tol)
        elif property_id == "U0":
            report.detail = _check_zero_at(func, integer, min(trials, 1000), seed, tol,
                                           uniform_matrix, "uniform")
        elif property_id == "O0":
            report.detail = _check_zero_at(func, integer, min(trials, 1000), seed, tol,
                                           one_column_matrix, "one-cluster")
        elif property_id == "B0":
            report.detail = _check_b0(func, integer, trials, seed, tol)
        elif property_id == "MON":
            min_inc = _check_mon(func, trials, seed, tol)
            report.strict = bool(min_inc > tol)
            report.detail = f"smallest increment {min_inc:.6g} ({'strict' if report.strict else 'weak'})"
    except _Refuted as r:
        report.verdict = REFUTED
        report.witness = r.witness
        report.detail = r.detail
    return report


def replay(report):
    """Re-run the witness of a refuted report; True if it still violates."""
    if report.verdict != REFUTED:
        raise ValueError("only refuted reports carry a witness")
    func = get_index(report.index).func
    w, p, tol = report.witness, report.property, report.tol
    if p in ("PER", "SYM", "SU", "SC"):
        return not _close(func(w[0]), func(w[1]), tol)
    if p == "MON":
        return func(w[1]) - func(w[0]) < -tol
    if p == "E0":
        if report.detail.startswith("exact"):
            return abs(exact_expectation(report.index, *w)) > ALGEBRAIC_TOL
        return True  # Monte Carlo refutations are replayed by rerunning check_property
    v = func(w)
    if p == "B1":
        return not _close(v, 1.0, tol) if _is_perfect(w) else (v >= 1.0 - tol or v > 1.0 + tol)
    if p in ("U0", "O0"):
        return abs(v) > tol
    if p == "B0":
        return v < -tol or v > tol
    raise AssertionError(p)


def _is_perfect(C):
    nz = np.asarray(C) > 0
    return bool(np.all(nz.sum(axis=1) == 1) and np.all(nz.sum(axis=0) == 1))


def property_matrix(index_ids=TABLE_INDICES, property_ids=PROPERTIES, trials=DEFAULT_TRIALS, seed=0):
    """``{(index_id, property_id): PropertyReport}`` for the cross product."""
    return {(i, p): check_property(i, p, trials=trials, seed=seed)
            for i in index_ids for p in property_ids}


def matrix_to_csv(reports, index_ids, property_ids=PROPERTIES):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index"] + list(property_ids))
    for i in index_ids:
        w.writerow([i] + [reports[i, p].symbol for p in property_ids])
    return buf.getvalue()


def format_report(reports, index_ids, property_ids=PROPERTIES):
    width = max(len(INDICES[i].label) for i in index_ids) if index_ids else 5
    lines = [" " * width + "  " + " ".join(f"{p:>4}" for p in property_ids)]
    for i in index_ids:
        cells = []
        for p in property_ids:
            r = reports[i, p]
            mark = r.symbol
            if p == "MON" and r.holds and r.strict is False:
                mark = "w"
            cells.append(f"{mark:>4}")
        lines.append(f"{INDICES[i].label:>{width}}  " + " ".join(cells))
    return "\n".join(lines)
