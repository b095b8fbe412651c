"""Command-line interface: ``cvm <command> [options]``.

Exit codes: 0 on success, 1 on usage or input errors, 2 when some
requested values are undefined for the given input.
"""

import argparse
import csv
import io
import json
import math
import os
import re
import sys

import numpy as np

from . import analysis, axioms, randmodels
from ._validation import UndefinedIndexError
from .core import confusion_from_labels, parse_labels, parse_matrix
from .indices import INDICES, TABLE_INDICES, get_index

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNDEFINED = 2

DEFAULT_COMPARE = ("nca", "na", "ca", "a", "ar", "ami", "nmi")
DEFAULT_EXPECTED = ("ar", "afm", "ami", "nca", "na", "nmi", "nba")
DEFAULT_MONOTONICITY = TABLE_INDICES
DEFAULT_TRAJECTORY = ("nca", "na", "ca", "nr_prime", "nmi", "ar")


class InputError(Exception):
    """Bad invocation or unreadable input; reported with exit code 1."""


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        if math.isnan(x):
            return "nan"
        return f"{float(x):.12g}"
    return str(x)


def _json_value(x):
    if isinstance(x, (float, np.floating)):
        return None if math.isnan(x) else float(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


def _emit(rows, columns, fmt, out):
    """Write a list of dict rows as CSV or a JSON array."""
    if fmt == "json":
        json.dump([{c: _json_value(r.get(c)) for c in columns} for r in rows], out, indent=2)
        out.write("\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])


def _read(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _index_list(text, default):
    ids = default if text is None else [t.strip() for t in text.split(",") if t.strip()]
    for i in ids:
        try:
            get_index(i)
        except KeyError as e:
            raise InputError(e.args[0]) from None
    return list(ids)


def _int_list(text, name):
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise InputError(f"{name} must be comma-separated integers, got {text!r}") from None


def _k_range(text):
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo > hi:
            raise InputError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return _int_list(text, "--k")


def _points_rule(text):
    """``"100*k^2"``-style rule for the number of points as a function of k."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:\*\s*k\s*(?:\^\s*(\d+))?)?\s*", text)
    if not m:
        raise InputError(f"--n-per must look like 'N', 'N*k' or 'N*k^p', got {text!r}")
    coef = int(m.group(1))
    if "k" not in text:
        return lambda k: coef
    power = int(m.group(2) or 1)
    return lambda k: coef * k**power


def _default_seed():
    value = os.environ.get("CVM_SEED")
    if value is None:
        return 0
    try:
        return int(value)
    except ValueError:
        raise InputError(f"CVM_SEED must be an integer, got {value!r}") from None


# commands ----------------------------------------------------------------

def cmd_compare(args, out):
    if args.matrix:
        if args.true or args.pred:
            raise InputError("give either --matrix or --true/--pred, not both")
        try:
            C = parse_matrix(_read(args.matrix))
        except ValueError as e:
            raise InputError(str(e)) from None
    else:
        if not (args.true and args.pred):
            raise InputError("need --true and --pred label files, or --matrix")
        try:
            y_true, y_pred = parse_labels(_read(args.true)), parse_labels(_read(args.pred))
            C = confusion_from_labels(y_true, y_pred)
            if C.k_pred < C.k:
                # predicted clusters that never occur count as empty
                C = confusion_from_labels(y_true, y_pred, k_pred=C.k)
        except ValueError as e:
            raise InputError(str(e)) from None
    ids = _index_list(args.indices, DEFAULT_COMPARE)
    if "accuracy" in ids and not args.diagnostic:
        raise InputError("plain accuracy is not a valid clustering measure; "
                         "pass --diagnostic to report it anyway")
    values, reasons = {}, {}
    for i in ids:
        try:
            values[i] = float(get_index(i).func(C))
        except (UndefinedIndexError, ValueError) as e:
            values[i] = None
            reasons[i] = str(e)
    if args.format == "json":
        payload = dict(values)
        if reasons:
            payload["reason"] = reasons
        json.dump(payload, out, indent=2)
        out.write("\n")
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(ids)
        w.writerow([_fmt(values[i]) for i in ids])
        for i, why in reasons.items():
            print(f"{i}: undefined ({why})", file=sys.stderr)
    return EXIT_UNDEFINED if reasons else EXIT_OK


def cmd_expected(args, out):
    ids = _index_list(args.indices, DEFAULT_EXPECTED)
    ks = _k_range(args.k)
    if min(ks) < 2:
        raise InputError("--k values must be >= 2")
    try:
        curve = randmodels.expectation_curve(ids, ks, _points_rule(args.n_per),
                                             samples=args.samples, seed=args.seed)
    except ValueError as e:
        raise InputError(str(e)) from None
    rows = []
    for k, n, est in curve:
        for i in ids:
            e = est[i]
            rows.append({"k": k, "n": n, "index": i, "mean": e.mean, "std_error": e.std_error,
                         "samples": e.samples, "undefined": e.undefined})
    _emit(rows, ["k", "n", "index", "mean", "std_error", "samples", "undefined"], args.format, out)
    return EXIT_OK


def cmd_monotonicity(args, out):
    ids = _index_list(args.indices, DEFAULT_MONOTONICITY)
    sizes = _int_list(args.sizes, "--sizes")
    if args.k is not None and args.k != len(sizes):
        raise InputError(f"--k {args.k} does not match {len(sizes)} sizes")
    try:
        res = randmodels.monotonicity_experiment(ids, sizes, samples=args.samples, seed=args.seed,
                                                 row=args.row, col=args.col)
    except (ValueError, IndexError) as e:
        raise InputError(str(e)) from None
    if args.raw:
        rows = []
        for i in ids:
            for b, d in enumerate(res.increments[i]):
                rows.append({"index": i, "sample": b, "increment": float(d)})
        _emit(rows, ["index", "sample", "increment"], args.format, out)
        return EXIT_OK
    rows = []
    for i in ids:
        d = res.increments[i]
        rows.append({"index": i, "count": int(d.size),
                     "min": float(d.min()) if d.size else math.nan,
                     "median": float(np.median(d)) if d.size else math.nan,
                     "max": float(d.max()) if d.size else math.nan,
                     "negative": int(np.sum(d < 0)), "skipped": res.skipped})
    _emit(rows, ["index", "count", "min", "median", "max", "negative", "skipped"], args.format, out)
    return EXIT_OK


def cmd_trajectory(args, out):
    ids = _index_list(args.indices, DEFAULT_TRAJECTORY)
    if args.k not in randmodels.BUILTIN_SCHEDULES:
        raise InputError(f"no built-in schedule for k={args.k}; "
                         f"available: {sorted(randmodels.BUILTIN_SCHEDULES)}")
    sizes, schedule = randmodels.BUILTIN_SCHEDULES[args.k]
    steps = randmodels.trajectory(sizes, schedule, ids)
    rows = [dict(step=s.step, phase=s.phase, **s.values) for s in steps]
    _emit(rows, ["step", "phase"] + ids, args.format, out)
    return EXIT_OK


def cmd_axioms(args, out):
    if args.all:
        ids = list(TABLE_INDICES)
    else:
        ids = _index_list(args.indices, TABLE_INDICES)
    props = list(axioms.PROPERTIES) if args.properties is None else \
        [p.strip().upper() for p in args.properties.split(",")]
    for p in props:
        if p not in axioms.PROPERTIES:
            raise InputError(f"unknown property {p!r}; known: {', '.join(axioms.PROPERTIES)}")
    reports = axioms.property_matrix(ids, props, trials=args.trials, seed=args.seed)
    if args.format == "json":
        payload = [{"index": r.index, "property": r.property, "verdict": r.verdict,
                    "strict": r.strict, "detail": r.detail, "trials": r.trials, "seed": r.seed,
                    "tol": r.tol} for r in reports.values()]
        json.dump(payload, out, indent=2)
        out.write("\n")
    else:
        out.write(axioms.matrix_to_csv(reports, ids, props))
    return EXIT_OK


def cmd_rank(args, out):
    try:
        table = analysis.read_score_table(_read(args.scores))
        ranking = analysis.median_ranking(table)
    except ValueError as e:
        raise InputError(str(e)) from None
    rows = [{"rank": r.rank, "algorithm": r.algorithm, "median": r.median} for r in ranking]
    _emit(rows, ["rank", "algorithm", "median"], args.format, out)
    return EXIT_OK


_CORRELATIONS = {"pearson": analysis.pearson, "spearman": analysis.spearman,
                 "kendall": analysis.kendall_tau}


def cmd_correlate(args, out):
    """Pairwise correlations between the numeric columns of a CSV file."""
    text = _read(args.scores)
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
        data = [[float(x) for x in row] for row in reader if row]
    except StopIteration:
        raise InputError("empty score file") from None
    except ValueError as e:
        raise InputError(f"non-numeric score: {e}") from None
    if not data or any(len(r) != len(header) for r in data):
        raise InputError("score file must have rows matching the header")
    cols = np.array(data).T
    methods = list(_CORRELATIONS) if args.method == "all" else [args.method]
    rows, undefined = [], False
    for a in range(len(header)):
        for b in range(a + 1, len(header)):
            row = {"x": header[a], "y": header[b]}
            for m in methods:
                try:
                    row[m] = _CORRELATIONS[m](cols[a], cols[b])
                except analysis.UndefinedCorrelationError:
                    row[m] = math.nan
                    undefined = True
                except ValueError as e:
                    raise InputError(str(e)) from None
            rows.append(row)
    _emit(rows, ["x", "y"] + methods, args.format, out)
    return EXIT_UNDEFINED if undefined else EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="cvm", description="External cluster validity measures.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_, description=help_)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.set_defaults(func=func)
        return sp

    sp = add("compare", cmd_compare, "Score a predicted partition against a reference one.")
    sp.add_argument("--true", metavar="PATH", help="reference label file ('-' for stdin)")
    sp.add_argument("--pred", metavar="PATH", help="predicted label file")
    sp.add_argument("--matrix", metavar="PATH", help="confusion matrix CSV, rows = reference")
    sp.add_argument("--indices", help=f"comma-separated ids; known: {', '.join(INDICES)}")
    sp.add_argument("--diagnostic", action="store_true",
                    help="allow the label-order dependent 'accuracy' index")

    sp = add("expected", cmd_expected, "Expected index values under the hypergeometric model.")
    sp.add_argument("--k", default="2..10", help="range 'a..b' or comma-separated list")
    sp.add_argument("--equal-sizes", action="store_true", default=True,
                    help="equal reference and predicted cluster sizes (the only mode)")
    sp.add_argument("--n-per", default="100*k^2", help="points as a function of k")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--indices")
    sp.add_argument("--seed", type=int)

    sp = add("monotonicity", cmd_monotonicity,
             "Index increments after a one-point improvement of random DMD matrices.")
    sp.add_argument("--k", type=int)
    sp.add_argument("--sizes", default="100,100,100,700")
    sp.add_argument("--samples", type=int, default=10000)
    sp.add_argument("--row", type=int, default=0, help="0-based reference cluster to improve")
    sp.add_argument("--col", type=int, default=1, help="0-based column losing the point")
    sp.add_argument("--raw", action="store_true", help="emit every increment")
    sp.add_argument("--indices")
    sp.add_argument("--seed", type=int)

    sp = add("trajectory", cmd_trajectory, "Index values along a built-in move schedule.")
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--indices")

    sp = add("axioms", cmd_axioms, "Check index properties by randomised search.")
    sp.add_argument("--all", action="store_true", help="all tabulated indices and properties")
    sp.add_argument("--indices")
    sp.add_argument("--properties")
    sp.add_argument("--trials", type=int, default=axioms.DEFAULT_TRIALS)
    sp.add_argument("--seed", type=int)

    sp = add("rank", cmd_rank, "Rank algorithms by median best score over datasets.")
    sp.add_argument("scores", help="CSV with algorithm,dataset,labelling,score")

    sp = add("correlate", cmd_correlate, "Pairwise correlations between score columns.")
    sp.add_argument("scores", help="CSV with a header; one column per index")
    sp.add_argument("--method", choices=("pearson", "spearman", "kendall", "all"), default="all")
    return p


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        for name in ("samples", "trials"):
            if getattr(args, name, 1) < 1:
                raise InputError(f"--{name} must be positive")
        return args.func(args, out)
    except InputError as e:
        print(f"cvm: error: {e}", file=sys.stderr)
        return EXIT_INPUT


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
