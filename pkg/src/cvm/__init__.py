"""External cluster validity measures built on confusion matrices.

The main entry points are :func:`compute` (any index by id), the
normalised clustering accuracy :func:`nca`, and the property harness in
:mod:`cvm.axioms`.
"""

from ._validation import IntegerMatrixError, UndefinedIndexError
from .assignment import (
    Assignment,
    brute_force_assignment,
    greedy_recursive_pairing,
    max_assignment,
    max_rectangular_assignment,
    max_surjective_matching,
)
from .core import (
    ConfusionMatrix,
    LabelVector,
    block_diagonal,
    canonicalize_labels,
    confusion_from_labels,
    one_column_matrix,
    perfect_matrix,
    uniform_matrix,
)
from .indices import INDICES, TABLE_INDICES, compute, get_index
from .info import ami, expected_mi, mi, ncmi, nmi
from .matching import (
    braun_blanquet_accuracy,
    clustering_accuracy,
    nca,
    nca_generalized,
    normalized_braun_blanquet_accuracy,
    normalized_pivoted_accuracy,
    pair_sets_index,
    pivoted_accuracy,
)
from .pairs import (
    adjusted_fowlkes_mallows,
    adjusted_rand,
    fowlkes_mallows,
    pair_counts,
    rand_index,
)

__version__ = "0.1.0"
