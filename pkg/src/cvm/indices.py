"""Registry of every index by its command-line id."""

from dataclasses import dataclass
from typing import Callable

from . import info, matching, pairs
from ._validation import is_integer_matrix


@dataclass(frozen=True)
class IndexInfo:
    id: str
    label: str
    func: Callable
    family: str
    integer_only: bool = False
    square_only: bool = True
    diagnostic: bool = False


_ENTRIES = [
    IndexInfo("r", "R", pairs.rand_index, "pairs", integer_only=True, square_only=False),
    IndexInfo("r_prime", "R'", pairs.rand_prime, "pairs", square_only=False),
    IndexInfo("fm", "FM", pairs.fowlkes_mallows, "pairs", integer_only=True, square_only=False),
    IndexInfo("fm_prime", "FM'", pairs.fowlkes_mallows_prime, "pairs", square_only=False),
    IndexInfo("mi", "MI", info.mi, "info", square_only=False),
    IndexInfo("a", "A", matching.pivoted_accuracy, "match"),
    IndexInfo("ba", "BA", matching.braun_blanquet_accuracy, "match"),
    IndexInfo("ca", "CA", matching.clustering_accuracy, "match"),
    IndexInfo("ar", "AR", pairs.adjusted_rand, "pairs", integer_only=True, square_only=False),
    IndexInfo("afm", "AFM", pairs.adjusted_fowlkes_mallows, "pairs", integer_only=True,
              square_only=False),
    IndexInfo("ami", "AMI", info.ami, "info", integer_only=True, square_only=False),
    IndexInfo("nr_prime", "NR'", pairs.normalized_rand_prime, "pairs", square_only=False),
    IndexInfo("nfm_prime", "NFM'", pairs.normalized_fowlkes_mallows_prime, "pairs",
              square_only=False),
    IndexInfo("nmi", "NMI", info.nmi, "info", square_only=False),
    IndexInfo("na", "NA", matching.normalized_pivoted_accuracy, "match"),
    IndexInfo("ncr_prime", "NCR'", pairs.normalized_corrected_rand_prime, "pairs",
              square_only=False),
    IndexInfo("ncfm_prime", "NCFM'", pairs.normalized_corrected_fowlkes_mallows_prime, "pairs",
              square_only=False),
    IndexInfo("ncmi", "NCMI", info.ncmi, "info", square_only=False),
    IndexInfo("nba", "NBA", matching.normalized_braun_blanquet_accuracy, "match"),
    IndexInfo("nca", "NCA", matching.nca, "match"),
    IndexInfo("psi", "PSI", matching.pair_sets_index, "match"),
    IndexInfo("purity", "P", lambda C: matching.purity(C, "cols"), "match", square_only=False),
    IndexInfo("purity_t", "P^T", lambda C: matching.purity(C, "rows"), "match",
              square_only=False),
    IndexInfo("accuracy", "plain accuracy", matching.plain_accuracy, "match", diagnostic=True),
    IndexInfo("nca_prime", "NCA'", lambda C: matching.nca_generalized(C, "penalizing"), "match",
              square_only=False),
    IndexInfo("nca_dprime", "NCA''", lambda C: matching.nca_generalized(C, "target"), "match",
              square_only=False),
    IndexInfo("z", "Z", matching.perfect_match_indicator, "match"),
]

INDICES = {e.id: e for e in _ENTRIES}

# the twenty indices whose properties are tabulated, in table order
TABLE_INDICES = (
    "r", "r_prime", "fm", "fm_prime", "mi", "a", "ba", "ca", "ar", "afm", "ami",
    "nr_prime", "nfm_prime", "nmi", "na", "ncr_prime", "ncfm_prime", "ncmi", "nba", "nca",
)

PAIR_IDS = ("r", "fm", "r_prime", "fm_prime", "ar", "afm", "nr_prime", "nfm_prime",
            "ncr_prime", "ncfm_prime")
MATCH_IDS = ("a", "na", "ca", "nca", "ba", "nba", "psi")


def get_index(index_id):
    try:
        return INDICES[index_id]
    except KeyError:
        raise KeyError(f"unknown index id {index_id!r}; known: {', '.join(INDICES)}") from None


def compute(index_id, C):
    """Evaluate the index `index_id` on `C`."""
    return get_index(index_id).func(C)


def pair_index(index_id, C):
    if index_id not in PAIR_IDS:
        raise KeyError(f"{index_id!r} is not a pair-counting index")
    return compute(index_id, C)


def match_index(index_id, C):
    if index_id not in MATCH_IDS:
        raise KeyError(f"{index_id!r} is not a set-matching index")
    return compute(index_id, C)


def applicable(index_id, C):
    """Whether `C` is within the domain of `index_id` (shape and integrality)."""
    entry = get_index(index_id)
    if entry.square_only and C.shape[0] != C.shape[1]:
        return False
    if entry.integer_only and not is_integer_matrix(C):
        return False
    return True
