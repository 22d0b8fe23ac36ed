"""Finite-alphabet version of the VEEGAN reconstructor objective.

The generator is a conditional table ``gen_cond[z, x] = q(x | z)`` and the
reconstructor a table ``rec_cond[x, z_hat] = p(z_hat | x)``; ``z_hat`` lives
on the same alphabet as ``z``. Each noise atom carries an embedding vector
so the squared reconstruction error has a geometry.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_markov_matrix
from .distributions import DiscreteDist, _label_from_json, _label_to_json, entropy
from .exceptions import ValidationError

BOUND_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class FiniteVeeganConfig:
    p0: DiscreteDist
    p_x: DiscreteDist
    gen_cond: np.ndarray
    rec_cond: np.ndarray
    embeddings: np.ndarray = field(default=None)

    def __post_init__(self):
        nz, nx = len(self.p0), len(self.p_x)
        gen = check_markov_matrix(self.gen_cond, "gen_cond")
        rec = check_markov_matrix(self.rec_cond, "rec_cond")
        if gen.shape != (nz, nx):
            raise ValidationError(f"gen_cond must be {nz}x{nx}, got {gen.shape}")
        if rec.shape != (nx, nz):
            raise ValidationError(f"rec_cond must be {nx}x{nz}, got {rec.shape}")
        if self.embeddings is None:
            emb = np.eye(nz)
        else:
            emb = np.array(self.embeddings, dtype=np.float64)
            if emb.ndim != 2 or emb.shape[0] != nz:
                raise ValidationError("embeddings must be one vector per z atom, all the same length")
        emb.setflags(write=False)
        object.__setattr__(self, "gen_cond", gen)
        object.__setattr__(self, "rec_cond", rec)
        object.__setattr__(self, "embeddings", emb)

    @classmethod
    def from_dict(cls, data):
        try:
            z_atoms = data["z_atoms"]
            z_labels = [_label_from_json(a["label"]) for a in z_atoms]
            emb = [a["embedding"] for a in z_atoms] if all("embedding" in a for a in z_atoms) else None
            p0 = DiscreteDist.from_dict(data["p0"])
            p_x = DiscreteDist.from_dict(data["p_x"])
            x_labels = [_label_from_json(lab) for lab in data["x_atoms"]]
            gen, rec = data["gen_cond"], data["rec_cond"]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed config document: missing {exc}") from None
        if list(p0.labels) != z_labels:
            raise ValidationError("p0 labels must match z_atoms in order")
        if list(p_x.labels) != x_labels:
            raise ValidationError("p_x labels must match x_atoms in order")
        return cls(p0, p_x, gen, rec, emb)

    def to_dict(self):
        return {
            "z_atoms": [{"label": _label_to_json(lab), "embedding": list(map(float, e))}
                        for lab, e in zip(self.p0.labels, self.embeddings)],
            "p0": self.p0.to_dict(),
            "x_atoms": [_label_to_json(lab) for lab in self.p_x.labels],
            "p_x": self.p_x.to_dict(),
            "gen_cond": self.gen_cond.tolist(),
            "rec_cond": self.rec_cond.tolist(),
        }


@dataclass(frozen=True)
class BoundReport:
    lhs: float
    rhs: float
    holds: bool

    @property
    def gap(self):
        return self.rhs - self.lhs


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return FiniteVeeganConfig.from_dict(json.load(fh))


def reconstructor_marginal(cfg):
    """Law of ``z_hat`` when the reconstructor is fed real data."""
    probs = cfg.p_x.probs @ cfg.rec_cond
    return DiscreteDist.from_probs(probs / probs.sum(), labels=cfg.p0.labels)


def generator_marginal(cfg):
    probs = cfg.p0.probs @ cfg.gen_cond
    return DiscreteDist.from_probs(probs / probs.sum(), labels=cfg.p_x.labels)


def cross_entropy_term(cfg):
    """H(p0, p_theta(z_hat)); ``inf`` if the marginal misses part of p0's support."""
    p0 = cfg.p0.probs
    marg = cfg.p_x.probs @ cfg.rec_cond
    support = p0 > 0
    if np.any(marg[support] == 0):
        return math.inf
    return float(-np.sum(p0[support] * np.log(marg[support])))


def _joints(cfg):
    forward = cfg.p0.probs[:, None] * cfg.gen_cond            # [z, x]
    backward = (cfg.rec_cond * cfg.p_x.probs[:, None]).T       # [z_hat, x]
    return forward, backward


def kl_joint(cfg):
    """KL between q(x|z) p0(z) and p(z_hat|x) p(x) on the (z, x) grid."""
    forward, backward = _joints(cfg)
    support = forward > 0
    if np.any(backward[support] == 0):
        return math.inf
    f, g = forward[support], backward[support]
    return float(np.sum(f * np.log(f / g)))


def autoencoder_loss(cfg):
    """Expected squared distance between the embeddings of z and F(G(z))."""
    emb = cfg.embeddings
    sq = np.sum((emb[:, None, :] - emb[None, :, :]) ** 2, axis=-1)
    chain = cfg.gen_cond @ cfg.rec_cond                        # [z, z_hat]
    return float(np.sum(cfg.p0.probs[:, None] * chain * sq))


def objective_upper_bound(cfg):
    """KL term + H(p0) + reconstruction loss."""
    return kl_joint(cfg) + entropy(cfg.p0) + autoencoder_loss(cfg)


def verify_bound(cfg, tol=BOUND_TOL):
    """Compare the cross-entropy objective with its KL upper bound."""
    ae = autoencoder_loss(cfg)
    lhs = cross_entropy_term(cfg) + ae
    rhs = objective_upper_bound(cfg)
    return BoundReport(lhs=lhs, rhs=rhs, holds=bool(lhs <= rhs + tol))


def optimum_diagnostics(cfg):
    forward, backward = _joints(cfg)
    return {
        "joint_mismatch": float(np.max(np.abs(forward - backward))),
        "autoencoder_loss": autoencoder_loss(cfg),
        "objective": objective_upper_bound(cfg),
        "entropy_p0": entropy(cfg.p0),
        "reconstructor_marginal_error": float(np.max(np.abs(
            cfg.p_x.probs @ cfg.rec_cond - cfg.p0.probs))),
        "generator_marginal_error": float(np.max(np.abs(
            cfg.p0.probs @ cfg.gen_cond - cfg.p_x.probs))),
    }


def matched_optimum_check(cfg, tol=1e-12):
    """True when the joints agree entrywise and reconstruction is exact.

    At such a point the objective collapses to H(p0) and both marginals match;
    the function raises if those consequences fail, as that would mean the
    tables are inconsistent beyond ``tol``.
    """
    diag = optimum_diagnostics(cfg)
    if diag["joint_mismatch"] > tol or diag["autoencoder_loss"] > tol:
        return False
    # Consequence errors scale with the alphabet sizes.
    slack = tol * (len(cfg.p0) + len(cfg.p_x))
    if (abs(diag["objective"] - diag["entropy_p0"]) > slack
            or diag["reconstructor_marginal_error"] > slack
            or diag["generator_marginal_error"] > slack):
        raise ArithmeticError(f"matched configuration violates optimum identities: {diag}")
    return True


def random_config(rng, n_z, n_x, dim=None, concentration=1.0):
    """Random config with Dirichlet rows; useful for verification campaigns."""
    def rows(k, n):
        return rng.dirichlet(np.full(n, concentration), size=k)

    p0 = DiscreteDist.from_probs(rng.dirichlet(np.ones(n_z)), labels=[f"z{i}" for i in range(n_z)])
    p_x = DiscreteDist.from_probs(rng.dirichlet(np.ones(n_x)), labels=[f"x{i}" for i in range(n_x)])
    emb = None if dim is None else rng.normal(size=(n_z, dim))
    return FiniteVeeganConfig(p0, p_x, rows(n_z, n_x), rows(n_x, n_z), emb)
