"""Mode-collapse regions and their geometry.

The upper boundary of the region of a pair ``(P, Q)`` is the discrete
Neyman-Pearson curve: atoms are visited in decreasing likelihood ratio
``P/Q`` and the cumulative ``(Q(S), P(S))`` pairs are its vertices. The
same object is the hypothesis-testing (ROC) region of the pair.
"""

import io
from dataclasses import dataclass

import numpy as np

from ._validation import check_same_labels
from .exceptions import DomainError, ValidationError

_RATIO_RTOL = 1e-12
_COLLINEAR_TOL = 1e-15


@dataclass(frozen=True)
class RegionBoundary:
    """Concave upper boundary from (0, 0) to (1, 1), as (epsilon, delta) vertices."""

    vertices: tuple

    def __post_init__(self):
        verts = tuple((float(e), float(d)) for e, d in self.vertices)
        if len(verts) < 2 or verts[0] != (0.0, 0.0) or verts[-1] != (1.0, 1.0):
            raise ValidationError("boundary must run from (0, 0) to (1, 1)")
        arr = np.array(verts)
        if np.any(np.diff(arr, axis=0) < -1e-15):
            raise ValidationError("boundary vertices must be non-decreasing in both axes")
        object.__setattr__(self, "vertices", verts)

    @property
    def epsilon(self):
        return np.array([v[0] for v in self.vertices])

    @property
    def delta(self):
        return np.array([v[1] for v in self.vertices])

    def delta_at(self, epsilon):
        """Largest delta on the boundary at ``epsilon`` (top of any vertical run)."""
        best = -np.inf
        for (e0, d0), (e1, d1) in zip(self.vertices, self.vertices[1:]):
            if e0 <= epsilon <= e1:
                if e1 == e0:
                    value = max(d0, d1)
                else:
                    value = d0 + (d1 - d0) * (epsilon - e0) / (e1 - e0)
                best = max(best, value)
        return float(best)

    def to_csv(self):
        buf = io.StringIO()
        buf.write("epsilon,delta\n")
        for e, d in self.vertices:
            buf.write(f"{e!r},{d!r}\n")
        return buf.getvalue()


def _same_ratio(a, b):
    if np.isinf(a) or np.isinf(b):
        return a == b
    return abs(a - b) <= _RATIO_RTOL * max(a, b)


def _drop_collinear(points):
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            cross = (x1 - x0) * (pt[1] - y0) - (y1 - y0) * (pt[0] - x0)
            # cross >= 0: hull[-1] is on or below the chord, not a vertex.
            if cross >= -_COLLINEAR_TOL:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def region_boundary(p, q):
    """Boundary of the mode-collapse region R(p, q).

    ``p`` is the target and ``q`` the generated distribution; both must share
    a label set.
    """
    qv = check_same_labels(p, q)
    pv = p.probs
    keep = (pv > 0) | (qv > 0)
    pv, qv = pv[keep], qv[keep]
    with np.errstate(divide="ignore"):
        ratio = np.where(qv > 0, pv / np.where(qv > 0, qv, 1.0), np.inf)
    order = np.argsort(-ratio, kind="stable")
    pv, qv, ratio = pv[order], qv[order], ratio[order]

    # Merge equal-ratio runs (including the q == 0 block) into one segment each.
    groups = []
    for r, pi, qi in zip(ratio, pv, qv):
        if groups and _same_ratio(r, groups[-1][0]):
            groups[-1][1] += pi
            groups[-1][2] += qi
        else:
            groups.append([r, pi, qi])

    points = [(0.0, 0.0)]
    eps = dlt = 0.0
    for _, pi, qi in groups:
        eps += qi
        dlt += pi
        points.append((eps, dlt))
    points[-1] = (1.0, 1.0)
    return RegionBoundary(tuple(_drop_collinear(points)))


def dtv_from_boundary(boundary):
    """Largest vertical gap between the boundary and the diagonal."""
    return float(max(d - e for e, d in boundary.vertices))


def region_area(boundary):
    """Area enclosed between the boundary and the diagonal (shoelace)."""
    x, y = boundary.epsilon, boundary.delta
    twice = np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
    return float(abs(twice) / 2.0)


def has_mode_collapse(boundary, epsilon, delta, tol=1e-12):
    """Whether ``(epsilon, delta)`` lies in the (convexified) collapse region."""
    if not 0.0 <= epsilon < delta <= 1.0:
        raise DomainError(f"need 0 <= epsilon < delta <= 1, got ({epsilon}, {delta})")
    return delta <= boundary.delta_at(epsilon) + tol
