"""Dense phase-1 simplex for small feasibility problems.

Solves ``min 1'a  s.t.  A x + a = b, x >= 0, a >= 0`` on a full tableau with
Bland's rule, which rules out cycling on degenerate problems.
"""

import numpy as np

from .exceptions import ValidationError

PIVOT_TOL = 1e-12


class SimplexIterationError(RuntimeError):
    """The pivot budget ran out (should not happen under Bland's rule)."""


def phase_one(A, b, pivot_tol=PIVOT_TOL, max_iter=50_000):
    """Find a point of ``{x >= 0 : A x = b}`` or the closest the LP can get.

    Returns ``(x, infeasibility)`` where ``infeasibility`` is the optimal sum
    of artificial slacks; it is zero (up to round-off) iff the system is
    feasible.
    """
    A = np.array(A, dtype=np.float64)
    b = np.array(b, dtype=np.float64)
    if A.ndim != 2 or b.shape != (A.shape[0],):
        raise ValidationError("A must be 2-D and b must match its row count")
    rows, cols = A.shape
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    tableau = np.zeros((rows + 1, cols + rows + 1))
    tableau[:rows, :cols] = A
    tableau[:rows, cols:cols + rows] = np.eye(rows)
    tableau[:rows, -1] = b
    tableau[rows, :cols] = -A.sum(axis=0)
    tableau[rows, -1] = -b.sum()
    basis = list(range(cols, cols + rows))

    for _ in range(max_iter):
        reduced = tableau[rows, :-1]
        candidates = np.flatnonzero(reduced < -pivot_tol)
        if candidates.size == 0:
            break
        enter = int(candidates[0])
        column = tableau[:rows, enter]
        positive = np.flatnonzero(column > pivot_tol)
        if positive.size == 0:
            # Unbounded direction cannot occur for a phase-1 objective bounded below.
            raise SimplexIterationError("phase-1 objective reported unbounded")
        ratios = tableau[positive, -1] / column[positive]
        best = ratios.min()
        ties = positive[ratios <= best + pivot_tol * max(1.0, abs(best))]
        leave = int(min(ties, key=lambda r: basis[r]))

        tableau[leave] /= tableau[leave, enter]
        for r in range(rows + 1):
            if r != leave and tableau[r, enter] != 0.0:
                tableau[r] -= tableau[r, enter] * tableau[leave]
        basis[leave] = enter
    else:
        raise SimplexIterationError(f"no convergence after {max_iter} pivots")

    x = np.zeros(cols + rows)
    x[basis] = tableau[:rows, -1]
    return x[:cols], float(max(-tableau[rows, -1], 0.0))
