"""scikit-learn style wrappers around the functional core.

``ModeCollapseRegion`` is fit on a (target, generated) pair of probability
vectors; ``KLDivergenceScorer`` is fit on reference labels (for example the
classes of a training set) and scores label arrays produced by classifying
generated samples.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted, column_or_1d

from .distributions import KL_SMOOTHING, DiscreteDist, kl_divergence, pack, total_variation
from .region import dtv_from_boundary, has_mode_collapse, region_area, region_boundary


def _as_dist(values, normalize):
    if isinstance(values, DiscreteDist):
        return values
    return DiscreteDist.from_probs(column_or_1d(values), normalize=normalize)


class ModeCollapseRegion(BaseEstimator):
    """Mode-collapse region of a target/generated pair, optionally packed.

    Parameters
    ----------
    degree : int, default=1
        Packing degree m; the region is built for (P^m, Q^m).
    normalize : bool, default=False
        Rescale non-negative weight vectors to sum to one instead of
        rejecting them.

    Attributes
    ----------
    boundary_ : RegionBoundary
    dtv_ : float
        Total variation of the (packed) pair.
    area_ : float
        Area between the boundary and the diagonal.
    """

    def __init__(self, degree=1, normalize=False):
        self.degree = degree
        self.normalize = normalize

    def fit(self, X, y):
        p = _as_dist(X, self.normalize)
        q = _as_dist(y, self.normalize)
        if self.degree != 1:
            p, q = pack(p, self.degree).atoms, pack(q, self.degree).atoms
        self.boundary_ = region_boundary(p, q)
        self.dtv_ = total_variation(p, q)
        self.area_ = region_area(self.boundary_)
        self.n_atoms_ = len(p)
        return self

    def predict(self, X):
        """Mode-collapse membership for each ``(epsilon, delta)`` row of X."""
        check_is_fitted(self, "boundary_")
        X = check_array(X)
        if X.shape[1] != 2:
            raise ValueError("X must have two columns: epsilon, delta")
        return np.array([has_mode_collapse(self.boundary_, e, d) for e, d in X])

    def score(self, X=None, y=None):
        check_is_fitted(self, "boundary_")
        return dtv_from_boundary(self.boundary_)


class KLDivergenceScorer(BaseEstimator):
    """KL divergence of generated label frequencies from reference frequencies.

    Zero frequencies are replaced by ``smoothing`` without renormalising.
    ``score`` returns the negated divergence so that larger is better.
    """

    def __init__(self, smoothing=KL_SMOOTHING, labels=None, log_base=None):
        self.smoothing = smoothing
        self.labels = labels
        self.log_base = log_base

    def fit(self, X, y=None):
        X = column_or_1d(np.asarray(X, dtype=object))
        observed = sorted(set(X.tolist()), key=str)
        if self.labels is None:
            classes = observed
        else:
            classes = list(self.labels)
            unknown = set(observed) - set(classes)
            if unknown:
                raise ValueError(f"reference contains labels outside `labels`: {sorted(map(str, unknown))}")
        self.classes_ = np.array(classes, dtype=object)
        self.reference_ = self._frequencies(X)
        self.n_samples_seen_ = X.size
        return self

    def _frequencies(self, X):
        index = {lab: i for i, lab in enumerate(self.classes_.tolist())}
        counts = np.zeros(len(index))
        for value in X.tolist():
            if value not in index:
                raise ValueError(f"label {value!r} was not seen during fit")
            counts[index[value]] += 1
        if counts.sum() == 0:
            raise ValueError("empty label array")
        return DiscreteDist(tuple(self.classes_.tolist()), counts / counts.sum())

    def divergence(self, X):
        check_is_fitted(self, "reference_")
        generated = self._frequencies(column_or_1d(np.asarray(X, dtype=object)))
        return kl_divergence(generated, self.reference_, smoothing=self.smoothing, base=self.log_base)

    def transform(self, X):
        """One KL value per trial; ``X`` is a sequence of label arrays."""
        return np.array([[self.divergence(trial)] for trial in X])

    def score(self, X, y=None):
        return -self.divergence(X)
