"""Blackwell comparison of experiments.

An experiment is a Markov matrix ``B`` (states x signals). A decision maker
with payoff ``U`` (actions x states) and prior ``p`` picks a row-stochastic
decision rule ``D`` (signals x actions); the best achievable expected payoff
is ``F(B, U, p) = max_D tr(B D U diag(p))``. ``B`` is more informative than
``C`` when ``C = B M`` for some Markov matrix ``M`` (a garbling).
"""

import enum
from dataclasses import dataclass

import numpy as np

from ._validation import check_markov_matrix, check_probability_vector
from .exceptions import ValidationError
from .simplex import phase_one

FACTORIZE_TOL = 1e-8
MAX_LP_SIZE = 400


class Verdict(enum.Enum):
    MORE_INFORMATIVE = "MoreInformative"
    NOT_MORE_INFORMATIVE = "NotMoreInformative"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class PayoffSpec:
    payoff: np.ndarray
    prior: np.ndarray

    def __post_init__(self):
        payoff = np.array(self.payoff, dtype=np.float64)
        if payoff.ndim != 2:
            raise ValidationError("payoff must be an (actions x states) matrix")
        prior = check_probability_vector(self.prior, name="prior", tol=1e-10)
        if payoff.shape[1] != prior.size:
            raise ValidationError(
                f"payoff has {payoff.shape[1]} state columns but prior has {prior.size} entries")
        payoff.setflags(write=False)
        object.__setattr__(self, "payoff", payoff)
        object.__setattr__(self, "prior", prior)


@dataclass(frozen=True)
class InformativenessResult:
    verdict: Verdict
    mixing: np.ndarray = None
    witness: PayoffSpec = None
    payoff_gap: float = None


def frobenius(a, b):
    """Frobenius inner product <A, B> = tr(A' B)."""
    return float(np.sum(np.asarray(a) * np.asarray(b)))


def _signal_payoffs(b, spec):
    # W[k, j] = sum_i p_i B_ij U_ki: value of action k after signal j.
    return spec.payoff @ (spec.prior[:, None] * b)


def max_expected_payoff(b, spec, return_decision=False):
    """Optimal expected payoff ``F(B, U, p)``.

    The objective is linear in ``D`` and separates over signals, so a
    deterministic rule picking the best action per signal is optimal.
    """
    b = check_markov_matrix(b, "B")
    if b.shape[0] != spec.prior.size:
        raise ValidationError(f"B has {b.shape[0]} states, prior has {spec.prior.size}")
    w = _signal_payoffs(b, spec)
    value = float(w.max(axis=0).sum())
    if not return_decision:
        return value
    decision = np.zeros((b.shape[1], w.shape[0]))
    decision[np.arange(b.shape[1]), w.argmax(axis=0)] = 1.0
    return value, decision


def factorize(b, c, tol=FACTORIZE_TOL):
    """Find a Markov ``M`` with ``B M = C``, or return ``None``.

    Feasibility is decided by a phase-1 LP over the entries of ``M``.
    """
    b = check_markov_matrix(b, "B")
    c = check_markov_matrix(c, "C")
    n, q = b.shape
    if c.shape[0] != n:
        raise ValidationError(f"B has {n} rows but C has {c.shape[0]}")
    q2 = c.shape[1]
    if n * q > MAX_LP_SIZE or q * q2 > MAX_LP_SIZE:
        raise ValidationError(f"factorization LP too large (limit {MAX_LP_SIZE})")

    # Unknowns: M flattened row-major, M[j, k] -> j * q2 + k.
    eq_bm = np.kron(b, np.eye(q2))             # (B M)[i, k] = C[i, k]
    eq_rows = np.kron(np.eye(q), np.ones(q2))  # sum_k M[j, k] = 1
    a_eq = np.vstack([eq_bm, eq_rows])
    b_eq = np.concatenate([c.ravel(), np.ones(q)])
    x, infeasibility = phase_one(a_eq, b_eq)
    if infeasibility > tol:
        return None
    m = np.clip(x.reshape(q, q2), 0.0, None)
    m /= m.sum(axis=1, keepdims=True)
    if np.max(np.abs(b @ m - c)) > tol:
        return None
    return m


def random_payoff(rng, n_actions, n_states):
    """Payoff entries i.i.d. U[-1, 1] and a prior uniform on the simplex."""
    payoff = rng.uniform(-1.0, 1.0, size=(n_actions, n_states))
    prior = rng.dirichlet(np.ones(n_states))
    return PayoffSpec(payoff, prior)


def is_more_informative(b, c, payoff_trials=1000, seed=0, tol=FACTORIZE_TOL):
    """Decide whether ``B`` is at least as informative as ``C``.

    A successful factorization proves it. Otherwise payoffs are sampled (the
    identity payoff under a uniform prior first) looking for one where ``C``
    does strictly better; failing that the answer is ``UNDETERMINED``.
    """
    b = check_markov_matrix(b, "B")
    c = check_markov_matrix(c, "C")
    if b.shape[0] != c.shape[0]:
        raise ValidationError("B and C must have the same number of states")
    m = factorize(b, c, tol=tol)
    if m is not None:
        return InformativenessResult(Verdict.MORE_INFORMATIVE, mixing=m)

    n = b.shape[0]
    rng = np.random.default_rng(seed)
    spec = PayoffSpec(np.eye(n), np.full(n, 1.0 / n))
    for trial in range(payoff_trials + 1):
        if trial:
            spec = random_payoff(rng, n, n)
        gap = max_expected_payoff(c, spec) - max_expected_payoff(b, spec)
        if gap > tol:
            return InformativenessResult(
                Verdict.NOT_MORE_INFORMATIVE, witness=spec, payoff_gap=float(gap))
    return InformativenessResult(Verdict.UNDETERMINED)
