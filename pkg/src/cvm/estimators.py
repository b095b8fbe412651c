"""scikit-learn style entry points: label-based scorers and a transformer
that relabels predicted clusters by the optimal matching."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_consistent_length, check_is_fitted, column_or_1d

from .assignment import max_rectangular_assignment
from .core import confusion_from_labels
from .indices import get_index


def _check_labels(labels_true, labels_pred):
    labels_true = column_or_1d(labels_true)
    labels_pred = column_or_1d(labels_pred)
    check_consistent_length(labels_true, labels_pred)
    if labels_true.size == 0:
        raise ValueError("label vectors are empty")
    return labels_true, labels_pred


def score_labels(index_id, labels_true, labels_pred):
    """Evaluate index `index_id` on two label vectors of equal length."""
    labels_true, labels_pred = _check_labels(labels_true, labels_pred)
    C = confusion_from_labels(labels_true.tolist(), labels_pred.tolist())
    if get_index(index_id).square_only and not C.is_square:
        # pad with empty predicted clusters so that k' == k where possible
        if C.k_pred < C.k:
            C = confusion_from_labels(labels_true.tolist(), labels_pred.tolist(), k_pred=C.k)
        else:
            raise ValueError(f"{index_id} needs as many predicted as reference clusters; "
                             f"got {C.k_pred} > {C.k}")
    return get_index(index_id).func(C)


def normalized_clustering_accuracy_score(labels_true, labels_pred):
    """NCA between a reference and a predicted labelling."""
    return score_labels("nca", labels_true, labels_pred)


def adjusted_rand_score(labels_true, labels_pred):
    return score_labels("ar", labels_true, labels_pred)


def adjusted_mutual_info_score(labels_true, labels_pred):
    return score_labels("ami", labels_true, labels_pred)


class OptimalLabelMatcher(TransformerMixin, BaseEstimator):
    """Relabel predicted clusters to the reference clusters they match best.

    ``fit(labels_pred, labels_true)`` solves the assignment that maximises
    the summed per-reference-cluster recall (the matching behind NCA);
    ``transform`` maps predicted labels through it. Predicted clusters left
    unmatched (when there are more of them than reference clusters) map to
    `unmatched_label`.

    Parameters
    ----------
    unmatched_label : object, default=-1
    """

    def __init__(self, unmatched_label=-1):
        self.unmatched_label = unmatched_label

    def fit(self, X, y):
        labels_true, labels_pred = _check_labels(y, X)
        true_classes = np.unique(labels_true)
        pred_classes = np.unique(labels_pred)
        C = np.zeros((true_classes.size, pred_classes.size))
        np.add.at(C, (np.searchsorted(true_classes, labels_true),
                      np.searchsorted(pred_classes, labels_pred)), 1.0)
        W = C / C.sum(axis=1, keepdims=True)
        pairs = max_rectangular_assignment(W).pairs
        self.mapping_ = {pred_classes[j].item(): true_classes[i].item() for i, j in pairs}
        self.classes_ = true_classes
        self.n_pred_clusters_ = pred_classes.size
        return self

    def transform(self, X):
        check_is_fitted(self, "mapping_")
        labels = column_or_1d(X)
        return np.array([self.mapping_.get(v.item(), self.unmatched_label) for v in labels])
