"""Envelope of packed total variation at a fixed unpacked distance tau.

For any pair with ``d_TV(P, Q) = tau`` the packed distance is bracketed by

* the outer construction ``U[0,1]`` vs ``U[tau,1]``: ``1 - (1 - tau)**m``;
* the inner binary construction ``[1-a, a]`` vs ``[1-a-tau, a+tau]``,
  minimised over ``0 <= a <= 1 - tau``.
"""

import io
import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_positive_int, check_unit_interval
from .distributions import pack, total_variation
from .exceptions import DomainError
from .region import region_area, region_boundary

MAX_BINOMIAL_DEGREE = 64
GRID_POINTS = 1024
ALPHA_TOL = 1e-10
_TIE_TOL = 1e-14
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class BoundQuery:
    tau: float
    m: int

    def __post_init__(self):
        object.__setattr__(self, "tau", check_unit_interval(self.tau, "tau"))
        object.__setattr__(self, "m", check_positive_int(self.m, "m"))


@dataclass(frozen=True)
class SweepRow:
    m: int
    dtv: float
    area: float
    lower: float
    upper: float


def dtv_upper_bound(tau, m):
    q = BoundQuery(tau, m)
    return 1.0 - (1.0 - q.tau) ** q.m


def _binomial_coefficients(m):
    coeffs = np.empty(m + 1)
    coeffs[0] = 1.0
    for k in range(m):
        coeffs[k + 1] = coeffs[k] * (m - k) / (k + 1)
    return coeffs


def _binomial_dtv_grid(alpha, tau, m):
    """binomial_dtv evaluated on an array of alphas."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=np.float64))[:, None]
    k = np.arange(m + 1)
    coeffs = _binomial_coefficients(m)
    beta = alpha + tau
    # 1 - alpha - tau can dip to -1e-17 at the right end of the interval.
    p = coeffs * alpha**k * (1.0 - alpha) ** (m - k)
    q = coeffs * beta**k * np.clip(1.0 - beta, 0.0, None) ** (m - k)
    return 0.5 * np.abs(p - q).sum(axis=1)


def binomial_dtv(alpha, tau, m):
    """TV between Binomial(m, alpha) and Binomial(m, alpha + tau).

    This equals the packed distance of the two-point laws ``[1-alpha, alpha]``
    and ``[1-alpha-tau, alpha+tau]``, since the number of ones is sufficient.
    """
    q = BoundQuery(tau, m)
    if q.m > MAX_BINOMIAL_DEGREE:
        raise DomainError(f"m must be at most {MAX_BINOMIAL_DEGREE}")
    if not -1e-15 <= alpha <= 1.0 - q.tau + 1e-15:
        raise DomainError(f"alpha must lie in [0, 1 - tau] = [0, {1 - q.tau}], got {alpha}")
    alpha = min(max(float(alpha), 0.0), 1.0 - q.tau)
    return float(_binomial_dtv_grid(alpha, q.tau, q.m)[0])


def golden_section(f, lo, hi, tol=ALPHA_TOL, max_iter=200):
    """Minimise a unimodal ``f`` on [lo, hi]; returns (x, f(x))."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    value, x = min([(f(x), x), (fc, c), (fd, d)])
    return float(x), value


def dtv_lower_bound(tau, m):
    """Minimum packed TV over all pairs at distance ``tau``: ``(alpha_star, value)``.

    A 1024-point grid locates the basin, golden-section search refines it.
    Ties keep the smallest grid alpha.
    """
    q = BoundQuery(tau, m)
    if q.m > MAX_BINOMIAL_DEGREE:
        raise DomainError(f"m must be at most {MAX_BINOMIAL_DEGREE}")
    width = 1.0 - q.tau
    if width <= 0.0:
        return 0.0, binomial_dtv(0.0, q.tau, q.m)
    grid = np.linspace(0.0, width, GRID_POINTS)
    values = _binomial_dtv_grid(grid, q.tau, q.m)
    i = int(np.flatnonzero(values <= values.min() + _TIE_TOL)[0])
    best_alpha, best_value = float(grid[i]), float(values[i])

    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, GRID_POINTS - 1)]
    alpha, value = golden_section(
        lambda a: float(_binomial_dtv_grid(a, q.tau, q.m)[0]), lo, hi)
    if value < best_value - _TIE_TOL:
        best_alpha, best_value = alpha, value
    return best_alpha, best_value


def packing_sweep(p, q, m_max, max_atoms=10**7):
    """Packed TV, region area and the tau-envelope for m = 1..m_max."""
    m_max = check_positive_int(m_max, "m_max")
    tau = total_variation(p, q)
    rows = []
    for m in range(1, m_max + 1):
        pm, qm = pack(p, m, max_atoms).atoms, pack(q, m, max_atoms).atoms
        rows.append(SweepRow(
            m=m,
            dtv=total_variation(pm, qm),
            area=region_area(region_boundary(pm, qm)),
            lower=dtv_lower_bound(tau, m)[1],
            upper=dtv_upper_bound(tau, m),
        ))
    return rows


def sweep_to_csv(rows):
    buf = io.StringIO()
    buf.write("m,dtv,area,lower,upper\n")
    for r in rows:
        buf.write(f"{r.m},{r.dtv!r},{r.area!r},{r.lower!r},{r.upper!r}\n")
    return buf.getvalue()


def bounds_curve(taus, m_max):
    """Rows ``(tau, m, lower, upper)`` for every tau and m = 1..m_max."""
    return [(float(t), m, dtv_lower_bound(t, m)[1], dtv_upper_bound(t, m))
            for t in taus for m in range(1, m_max + 1)]


def bounds_curve_to_csv(rows):
    buf = io.StringIO()
    buf.write("tau,m,lower,upper\n")
    for tau, m, lower, upper in rows:
        buf.write(f"{tau!r},{m},{lower!r},{upper!r}\n")
    return buf.getvalue()
