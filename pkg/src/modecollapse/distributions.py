"""Finite and piecewise-uniform distributions and their basic functionals.

Everything here works in nats. Distributions are immutable: the probability
arrays are flagged read-only on construction.
"""

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import PROB_TOL, check_positive_int, check_probability_vector, check_same_labels
from .exceptions import EnumerationLimitError, ValidationError

DEFAULT_MAX_ATOMS = 10**7
KL_SMOOTHING = 1e-10


def _label_to_json(label):
    if isinstance(label, tuple):
        return [_label_to_json(part) for part in label]
    if isinstance(label, (str, int, float)) and not isinstance(label, bool):
        return label
    return str(label)


def _label_from_json(label):
    if isinstance(label, list):
        return tuple(_label_from_json(part) for part in label)
    return label


@dataclass(frozen=True, eq=False)
class DiscreteDist:
    """A probability vector over an ordered set of hashable labels."""

    labels: tuple
    probs: np.ndarray

    def __post_init__(self):
        labels = tuple(self.labels)
        probs = check_probability_vector(self.probs)
        if len(labels) != probs.size:
            raise ValidationError(
                f"{len(labels)} labels given for {probs.size} probabilities")
        if len(set(labels)) != len(labels):
            raise ValidationError("labels must be unique")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_probs(cls, probs, labels=None, normalize=False):
        probs = check_probability_vector(probs, normalize=normalize)
        if labels is None:
            labels = range(probs.size)
        return cls(tuple(labels), probs)

    @classmethod
    def from_dict(cls, data, normalize=False):
        try:
            atoms = data["atoms"]
            labels = [_label_from_json(a["label"]) for a in atoms]
            probs = [float(a["prob"]) for a in atoms]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed distribution document: {exc}") from None
        return cls.from_probs(probs, labels=labels, normalize=normalize)

    @classmethod
    def _unchecked(cls, labels, probs):
        # Callers guarantee unique labels and a valid vector (e.g. packing).
        obj = object.__new__(cls)
        probs = np.asarray(probs, dtype=np.float64)
        probs.setflags(write=False)
        object.__setattr__(obj, "labels", tuple(labels))
        object.__setattr__(obj, "probs", probs)
        return obj

    def to_dict(self):
        return {"atoms": [{"label": _label_to_json(lab), "prob": float(pr)}
                          for lab, pr in zip(self.labels, self.probs)]}

    def __len__(self):
        return len(self.labels)

    def __eq__(self, other):
        if not isinstance(other, DiscreteDist):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.probs, other.probs)

    def __hash__(self):
        return hash((self.labels, self.probs.tobytes()))

    def __repr__(self):
        atoms = ", ".join(f"{lab!r}: {pr:.6g}" for lab, pr in zip(self.labels[:6], self.probs))
        more = ", ..." if len(self.labels) > 6 else ""
        return f"DiscreteDist({{{atoms}{more}}})"

    def prob(self, label):
        return float(self.probs[self.labels.index(label)])


@dataclass(frozen=True)
class PiecewiseUniformDist:
    """Density that is constant on each of a few disjoint intervals.

    ``segments`` holds ``(lo, hi, mass)`` triples sorted by ``lo``; the density
    on a segment is ``mass / (hi - lo)``.
    """

    segments: tuple

    def __post_init__(self):
        segs = []
        for seg in self.segments:
            try:
                lo, hi, mass = (float(v) for v in seg)
            except (TypeError, ValueError):
                raise ValidationError(f"segment {seg!r} is not a (lo, hi, mass) triple") from None
            if not all(map(math.isfinite, (lo, hi, mass))):
                raise ValidationError(f"segment {seg!r} has non-finite values")
            if not lo < hi:
                raise ValidationError(f"segment [{lo}, {hi}] is empty or reversed")
            if mass < 0:
                raise ValidationError(f"segment [{lo}, {hi}] has negative mass {mass}")
            segs.append((lo, hi, mass))
        if not segs:
            raise ValidationError("at least one segment is required")
        for (_, hi, _), (lo, _, _) in zip(segs, segs[1:]):
            if lo < hi:
                raise ValidationError("segments must be sorted and non-overlapping")
        total = math.fsum(s[2] for s in segs)
        if abs(total - 1.0) > PROB_TOL:
            raise ValidationError(f"segment masses sum to {total!r}, expected 1")
        object.__setattr__(self, "segments", tuple(segs))

    @classmethod
    def uniform(cls, lo, hi):
        return cls(((lo, hi, 1.0),))

    @classmethod
    def from_dict(cls, data):
        try:
            segs = [(s["lo"], s["hi"], s["mass"]) for s in data["segments"]]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed segment document: {exc}") from None
        return cls(tuple(segs))

    def to_dict(self):
        return {"segments": [{"lo": lo, "hi": hi, "mass": mass}
                             for lo, hi, mass in self.segments]}

    @property
    def support(self):
        return self.segments[0][0], self.segments[-1][1]

    @property
    def breakpoints(self):
        return sorted({x for lo, hi, _ in self.segments for x in (lo, hi)})

    def cell_masses(self, grid):
        """Mass of each cell ``[grid[i], grid[i+1]]`` of a sorted grid."""
        grid = np.asarray(grid, dtype=np.float64)
        a, b = grid[:-1, None], grid[1:, None]
        lo, hi, mass = (np.array(col) for col in zip(*self.segments))
        overlap = np.clip(np.minimum(hi, b) - np.maximum(lo, a), 0.0, None)
        return (overlap * (mass / (hi - lo))).sum(axis=1)

    def ppf(self, u):
        """Inverse CDF, vectorised over ``u`` in [0, 1)."""
        u = np.asarray(u, dtype=np.float64)
        segs = [s for s in self.segments if s[2] > 0]
        lo, hi, mass = (np.array(col) for col in zip(*segs))
        upper = np.cumsum(mass)
        idx = np.minimum(np.searchsorted(upper, u, side="right"), len(segs) - 1)
        start = upper[idx] - mass[idx]
        x = lo[idx] + (u - start) / mass[idx] * (hi[idx] - lo[idx])
        return np.clip(x, lo[idx], hi[idx])


@dataclass(frozen=True)
class PackedDist:
    """The m-fold product of ``base``; ``atoms`` is indexed by label tuples."""

    base: DiscreteDist
    degree: int
    atoms: DiscreteDist = field(repr=False)

    @property
    def labels(self):
        return self.atoms.labels

    @property
    def probs(self):
        return self.atoms.probs

    def marginal(self, axis):
        """Sum out every coordinate except ``axis``."""
        shape = (len(self.base),) * self.degree
        tensor = self.probs.reshape(shape)
        others = tuple(i for i in range(self.degree) if i != axis)
        return DiscreteDist(self.base.labels, tensor.sum(axis=others))


def cell_label(lo, hi):
    return f"[{float(lo)!r},{float(hi)!r}]"


def discretize_on_grid(pw, grid):
    """Cell masses of ``pw`` on an explicit sorted grid (cells may carry zero mass)."""
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise ValidationError("grid must be strictly increasing with at least two points")
    lo, hi = pw.support
    if grid[0] > lo or grid[-1] < hi:
        raise ValidationError(f"grid [{grid[0]}, {grid[-1]}] does not cover support [{lo}, {hi}]")
    return _cells_to_dist(pw, grid)


def _cells_to_dist(pw, grid):
    labels = [cell_label(a, b) for a, b in zip(grid[:-1], grid[1:])]
    masses = pw.cell_masses(grid)
    return DiscreteDist(labels, masses)


def discretize(pw, extra_breakpoints=()):
    """Exact cell masses of ``pw`` on its own breakpoints plus ``extra_breakpoints``.

    Breakpoints outside the support are ignored. Gaps between segments become
    zero-mass cells.
    """
    lo, hi = pw.support
    extra = [float(x) for x in extra_breakpoints if lo <= float(x) <= hi]
    grid = np.unique(np.array(pw.breakpoints + extra))
    return _cells_to_dist(pw, grid)


def common_refinement(p, q):
    """Discretize two piecewise-uniform laws on the union of their breakpoints."""
    grid = np.unique(np.array(p.breakpoints + q.breakpoints))
    return _cells_to_dist(p, grid), _cells_to_dist(q, grid)


def total_variation(p, q):
    """Half the L1 distance between two distributions on the same labels."""
    qp = check_same_labels(p, q)
    return float(0.5 * np.abs(p.probs - qp).sum())


def pack(p, m, max_atoms=DEFAULT_MAX_ATOMS):
    """Product distribution of ``m`` independent copies of ``p``.

    Tuples are ordered lexicographically in the base label order.
    """
    m = check_positive_int(m, "m")
    n = len(p)
    if n**m > max_atoms:
        raise EnumerationLimitError(
            f"packing {n} atoms to degree {m} gives {n**m} tuples (limit {max_atoms})")
    probs = p.probs
    for _ in range(m - 1):
        probs = np.multiply.outer(probs, p.probs).ravel()
    labels = itertools.product(p.labels, repeat=m)
    return PackedDist(p, m, DiscreteDist._unchecked(labels, probs))


def kl_divergence(q, p, smoothing=0.0, base=None):
    """KL(q || p) in nats (or ``base`` if given).

    When ``smoothing > 0`` every zero entry of either vector is replaced by
    ``smoothing`` and the vectors are *not* renormalised. With no smoothing,
    zero entries of ``q`` contribute nothing and a zero of ``p`` under positive
    ``q`` returns ``inf``.
    """
    if smoothing < 0:
        raise ValidationError("smoothing must be non-negative")
    pp = check_same_labels(q, p)
    qq = q.probs
    if smoothing > 0:
        qq = np.where(qq == 0, smoothing, qq)
        pp = np.where(pp == 0, smoothing, pp)
    else:
        if np.any((pp == 0) & (qq > 0)):
            return math.inf
        keep = qq > 0
        qq, pp = qq[keep], pp[keep]
    value = float(np.sum(qq * np.log(qq / pp)))
    if base is not None:
        value /= math.log(base)
    return value


def entropy(p):
    """Shannon entropy in nats with 0 log 0 = 0."""
    nz = p.probs[p.probs > 0]
    return float(-np.sum(nz * np.log(nz)))


def dist_from_dict(data, normalize=False):
    """Build a DiscreteDist or PiecewiseUniformDist from its JSON document."""
    if "atoms" in data:
        return DiscreteDist.from_dict(data, normalize=normalize)
    if "segments" in data:
        return PiecewiseUniformDist.from_dict(data)
    raise ValidationError("expected an 'atoms' or 'segments' document")


def load_dist(path, normalize=False):
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from None
    return dist_from_dict(data, normalize=normalize)


def dump_dist(dist, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(dist.to_dict(), fh, indent=2)
        fh.write("\n")
