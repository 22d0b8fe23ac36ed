"""Label-histogram evaluation: KL reports, synthetic sampling and plot data.

Random draws use numpy's PCG64 bit generator seeded with the user's integer
seed, so counts are reproducible across platforms and numpy versions that
keep PCG64's stream stable.
"""

import csv
import io
import json
import statistics
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bounds import bounds_curve, bounds_curve_to_csv, packing_sweep, sweep_to_csv
from .distributions import KL_SMOOTHING, DiscreteDist, cell_label, kl_divergence
from .exceptions import ValidationError
from .region import region_boundary


@dataclass(frozen=True)
class LabelCounts:
    """Non-negative integer counts keyed by label, in first-seen order."""

    counts: dict

    def __post_init__(self):
        clean = {}
        for label, count in self.counts.items():
            if isinstance(count, bool) or int(count) != count or count < 0:
                raise ValidationError(f"count for {label!r} must be a non-negative integer")
            clean[label] = int(count)
        object.__setattr__(self, "counts", clean)

    @classmethod
    def from_labels(cls, labels):
        return cls(dict(Counter(labels)))

    @property
    def total(self):
        return sum(self.counts.values())

    @property
    def labels(self):
        return tuple(self.counts)

    def to_dist(self, labels=None):
        """Empirical distribution, optionally on a wider label set (zeros filled)."""
        if self.total <= 0:
            raise ValidationError("cannot form frequencies from an empty histogram")
        labels = self.labels if labels is None else tuple(labels)
        missing = set(self.counts) - set(labels)
        if missing:
            raise ValidationError(f"labels {sorted(map(str, missing))} are not in the label set")
        probs = np.array([self.counts.get(lab, 0) for lab in labels], dtype=np.float64)
        return DiscreteDist(labels, probs / self.total)


def load_counts(path):
    """Read a histogram from ``label,count`` CSV or a JSON ``{label: count}`` map."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        raise ValidationError(f"{path}: file is empty")
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            # Keep raw pairs: a plain dict would drop duplicate labels silently.
            data = json.loads(text, object_pairs_hook=list)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
        if not text.lstrip().startswith("{") or not isinstance(data, list):
            raise ValidationError(f"{path}: expected a JSON object mapping label to count")
        counts = {}
        for label, count in data:
            if label in counts:
                raise ValidationError(f"{path}: duplicate label {label!r}")
            if not isinstance(count, int) or isinstance(count, bool) or count < 0:
                raise ValidationError(f"{path}: count for label {label!r} must be a non-negative integer")
            counts[label] = count
        return LabelCounts(counts)

    counts, seen_header = {}, False
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        if len(row) < 2:
            raise ValidationError(f"{path}:{lineno}: expected 'label,count'")
        label, raw = row[0].strip(), row[1].strip()
        if not counts and not seen_header and raw.lower() == "count":
            seen_header = True
            continue
        try:
            count = int(raw)
        except ValueError:
            raise ValidationError(f"{path}:{lineno}: count {raw!r} is not an integer") from None
        if count < 0:
            raise ValidationError(f"{path}:{lineno}: negative count {count}")
        if label in counts:
            raise ValidationError(f"{path}:{lineno}: duplicate label {label!r}")
        counts[label] = count
    if not counts:
        raise ValidationError(f"{path}: no data rows")
    return LabelCounts(counts)


@dataclass(frozen=True)
class KlRow:
    source: str
    kl: float
    trial_kls: tuple = field(default=())


@dataclass(frozen=True)
class KlReport:
    rows: tuple
    reference: str
    smoothing: float
    trial_count: int
    log_base: float = None

    def to_dict(self):
        return {
            "reference": self.reference,
            "smoothing": self.smoothing,
            "log_base": self.log_base,
            "trial_count": self.trial_count,
            "rows": [{"source": r.source, "kl": r.kl, "trials": list(r.trial_kls)}
                     for r in self.rows],
        }

    @classmethod
    def from_dict(cls, data):
        rows = tuple(KlRow(r["source"], float(r["kl"]), tuple(map(float, r["trials"])))
                     for r in data["rows"])
        return cls(rows, data["reference"], float(data["smoothing"]),
                   int(data["trial_count"]), data.get("log_base"))

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_csv(self):
        buf = io.StringIO()
        buf.write(f"# reference={self.reference}\n")
        buf.write(f"# smoothing={self.smoothing!r}\n")
        buf.write(f"# log_base={self.log_base!r}\n")
        buf.write(f"# trial_count={self.trial_count}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["source", "kl", "trials"])
        for r in self.rows:
            writer.writerow([r.source, repr(r.kl), ";".join(map(repr, r.trial_kls))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        meta, body = {}, []
        for line in text.splitlines():
            if line.startswith("# ") and "=" in line:
                key, value = line[2:].split("=", 1)
                meta[key] = value
            elif line.strip():
                body.append(line)
        reader = csv.DictReader(body)
        rows = tuple(KlRow(r["source"], float(r["kl"]),
                           tuple(float(v) for v in r["trials"].split(";") if v))
                     for r in reader)
        log_base = None if meta.get("log_base", "None") == "None" else float(meta["log_base"])
        return cls(rows, meta["reference"], float(meta["smoothing"]),
                   int(meta["trial_count"]), log_base)

    def format_table(self, digits=3):
        """Plain-text table: one line per source with its average KL."""
        width = max([len("source")] + [len(r.source) for r in self.rows])
        lines = [f"{'source':<{width}}  Average KL divergence"]
        lines += [f"{r.source:<{width}}  {r.kl:.{digits}f}" for r in self.rows]
        return "\n".join(lines) + "\n"


def kl_report(generated, reference, smoothing=KL_SMOOTHING, reference_name="reference",
              log_base=None):
    """Average KL(generated || reference) per source name.

    ``generated`` is a sequence of ``(name, LabelCounts)``; repeated names are
    trials of the same source and their KLs are averaged. Labels missing from
    a histogram count as zero and are then smoothed.
    """
    if reference.total <= 0:
        raise ValidationError("reference histogram is empty")
    labels = list(reference.labels)
    for _, counts in generated:
        labels += [lab for lab in counts.labels if lab not in labels]
    ref = reference.to_dist(labels)

    per_source = {}
    for name, counts in generated:
        value = kl_divergence(counts.to_dist(labels), ref, smoothing=smoothing, base=log_base)
        per_source.setdefault(name, []).append(value)
    rows = tuple(KlRow(name, statistics.fmean(vals), tuple(vals))
                 for name, vals in per_source.items())
    trials = max((len(r.trial_kls) for r in rows), default=0)
    return KlReport(rows, reference_name, smoothing, trials, log_base)


def sample_synthetic(dist, n, bins, seed):
    """Draw ``n`` points from a piecewise-uniform law and histogram them on ``bins``."""
    draws = _draw(dist, n, seed)
    edges = _check_bins(dist, bins)
    idx = _bin_index(draws, edges)
    counts = np.bincount(idx, minlength=len(edges) - 1)
    return LabelCounts({cell_label(a, b): int(c)
                        for a, b, c in zip(edges[:-1], edges[1:], counts)})


def sample_packed(dist, n, m, bins, seed):
    """Histogram of consecutive, non-overlapping m-tuples of bin labels."""
    draws = _draw(dist, n * m, seed)
    edges = _check_bins(dist, bins)
    idx = _bin_index(draws, edges).reshape(n, m)
    cells = [cell_label(a, b) for a, b in zip(edges[:-1], edges[1:])]
    return LabelCounts.from_labels(tuple(cells[i] for i in row) for row in idx.tolist())


def _draw(dist, n, seed):
    if int(n) <= 0:
        raise ValidationError("sample size must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    return dist.ppf(rng.random(int(n)))


def _check_bins(dist, bins):
    edges = np.asarray(sorted(float(b) for b in bins))
    lo, hi = dist.support
    if edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise ValidationError("bins must contain at least two distinct breakpoints")
    if edges[0] > lo or edges[-1] < hi:
        raise ValidationError(f"bins [{edges[0]}, {edges[-1]}] do not cover support [{lo}, {hi}]")
    return edges


def _bin_index(x, edges):
    return np.clip(np.searchsorted(edges, x, side="right") - 1, 0, len(edges) - 2)


def frequency_csv(counts):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "count", "probability"])
    total = counts.total
    for label, count in counts.counts.items():
        writer.writerow([label, count, repr(count / total)])
    return buf.getvalue()


def region_csv(p, q):
    return region_boundary(p, q).to_csv()


def emit_plot_data(job, out, **params):
    """Write the CSV for one plot job and return its path.

    Jobs and their parameters:

    * ``region``: ``p``, ``q`` (DiscreteDist on shared labels)
    * ``pack-sweep``: ``p``, ``q``, ``m_max``
    * ``bounds-curve``: ``taus``, ``m_max``
    * ``frequency``: ``counts`` (LabelCounts)
    """
    if job == "region":
        text = region_csv(params["p"], params["q"])
    elif job == "pack-sweep":
        text = sweep_to_csv(packing_sweep(params["p"], params["q"], params["m_max"]))
    elif job == "bounds-curve":
        text = bounds_curve_to_csv(bounds_curve(params["taus"], params["m_max"]))
    elif job == "frequency":
        text = frequency_csv(params["counts"])
    else:
        raise ValidationError(f"unknown plot job {job!r}")
    out = Path(out)
    try:
        out.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {out}: {exc.strerror}") from exc
    return out


def empirical_tv(counts_a, counts_b):
    """Total variation between two histograms on the union of their labels."""
    labels = list(counts_a.labels) + [lab for lab in counts_b.labels if lab not in counts_a.counts]
    a, b = counts_a.to_dist(labels), counts_b.to_dist(labels)
    return float(0.5 * np.abs(a.probs - b.probs).sum())

