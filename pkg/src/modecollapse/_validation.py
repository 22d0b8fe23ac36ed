"""Input validation helpers shared by the library and the estimator wrappers."""

import numbers

import numpy as np

from .exceptions import DomainError, ValidationError

PROB_TOL = 1e-12
MARKOV_TOL = 1e-10


def check_probability_vector(values, name="probs", tol=PROB_TOL, normalize=False):
    """Return ``values`` as a read-only float vector that sums to one.

    With ``normalize=True`` non-negative weights are rescaled instead of
    being required to sum to one already.
    """
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError(f"{name} must be a non-empty 1-D vector")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    if np.any(arr < 0):
        raise ValidationError(f"{name} has negative entries")
    total = arr.sum()
    if normalize:
        if total <= 0:
            raise ValidationError(f"{name} has zero total weight")
        arr = arr / total
    elif abs(total - 1.0) > tol:
        raise ValidationError(f"{name} sums to {total!r}, expected 1 within {tol:g}")
    arr.setflags(write=False)
    return arr


def check_markov_matrix(a, name="matrix", tol=MARKOV_TOL):
    """Validate a row-stochastic matrix and return it as a float array."""
    arr = np.array(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValidationError(f"{name} must be a non-empty 2-D matrix")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    if np.any(arr < 0):
        raise ValidationError(f"{name} has negative entries")
    row_err = np.abs(arr.sum(axis=1) - 1.0)
    if np.any(row_err > tol):
        bad = int(np.argmax(row_err))
        raise ValidationError(f"{name} row {bad} sums to {arr[bad].sum()!r}, not 1")
    arr.setflags(write=False)
    return arr


def check_positive_int(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise DomainError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_unit_interval(value, name):
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def check_same_labels(p, q):
    """Return q's probabilities re-ordered to p's label order."""
    if p.labels == q.labels:
        return q.probs
    if set(p.labels) != set(q.labels) or len(p.labels) != len(q.labels):
        raise ValidationError("distributions are defined on different label sets")
    index = {label: i for i, label in enumerate(q.labels)}
    return q.probs[[index[label] for label in p.labels]]
