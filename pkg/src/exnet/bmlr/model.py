"""Three-level binomial-logistic model: data layout and joint log density.

Level 1: y_e ~ Binomial(n_e, logistic(u_e)) per collaboration dyad.
Level 2: u_e ~ Normal(tau_{ref(e)}, sigma2_u), centered on the reference effect.
Level 3: tau_r ~ Normal(beta0, sigma2_tau).
Priors:  beta0 ~ Normal(0, 1000); both variances ~ half-Normal(0, var=1000).

The hierarchical centering is structural: each level's effects have the next
level's effect as their mean, which is what keeps componentwise random-walk
updates well mixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..corpus import SubjectAreaDataset
from ..numerics import log_binom_coeff, softplus

PRIOR_VAR = 1000.0


@dataclass
class ModelParams:
    beta0: float
    sigma2_u: float
    sigma2_tau: float
    tau: np.ndarray  # one per reference institution
    u: np.ndarray    # one per edge


@dataclass
class ModelData:
    """Dataset in canonical array form: references sorted, edges sorted by (ref, net)."""

    subject: str
    ref_ids: list[str]
    edge_keys: list[tuple[str, str]]
    y: np.ndarray             # float64 (E,)
    n: np.ndarray             # float64 (E,)
    ref_of_edge: np.ndarray   # int64 (E,)
    edge_start: np.ndarray    # int64 (R+1,), edge ranges per reference
    edge_count: np.ndarray    # float64 (R,)

    @property
    def n_edges(self) -> int:
        return self.y.shape[0]

    @property
    def n_refs(self) -> int:
        return len(self.ref_ids)

    @classmethod
    def from_dataset(cls, ds: SubjectAreaDataset) -> "ModelData":
        edges = sorted(ds.edges, key=lambda e: (e.ref_id, e.net_id))
        ref_ids = sorted({e.ref_id for e in edges})
        ref_index = {r: i for i, r in enumerate(ref_ids)}
        y = np.array([e.n_top for e in edges], dtype=np.float64)
        n = np.array([e.n_papers for e in edges], dtype=np.float64)
        ref_of_edge = np.array([ref_index[e.ref_id] for e in edges], dtype=np.int64)
        counts = np.bincount(ref_of_edge, minlength=len(ref_ids))
        if len(ref_ids) and counts.min() < 1:
            raise ValueError("every reference must carry at least one edge")
        edge_start = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
        return cls(
            subject=ds.subject,
            ref_ids=ref_ids,
            edge_keys=[(e.ref_id, e.net_id) for e in edges],
            y=y,
            n=n,
            ref_of_edge=ref_of_edge,
            edge_start=edge_start,
            edge_count=counts.astype(np.float64),
        )


def as_model_data(data) -> ModelData:
    if isinstance(data, ModelData):
        return data
    return ModelData.from_dataset(data)


def normal_logpdf(x, mean, var):
    x = np.asarray(x, dtype=np.float64)
    return -0.5 * (np.log(2.0 * np.pi * var) + (x - mean) ** 2 / var)


def halfnormal_logpdf(x, var):
    """Half-normal density on [0, inf) with scale**2 = var."""
    if np.any(np.asarray(x) < 0):
        return -np.inf
    return math.log(2.0) + normal_logpdf(x, 0.0, var)


def binomial_loglik(y, n, u):
    """Binomial log-pmf with success logit u, including the combinatorial term."""
    u = np.asarray(u, dtype=np.float64)
    return log_binom_coeff(n, y) + y * u - n * softplus(u)


def log_posterior(params: ModelParams, data: SubjectAreaDataset | ModelData) -> float:
    """Joint log density of data and parameters (all constants included)."""
    md = as_model_data(data)
    if params.sigma2_u <= 0.0 or params.sigma2_tau <= 0.0:
        raise ValueError("variance components must be positive")
    tau = np.asarray(params.tau, dtype=np.float64)
    u = np.asarray(params.u, dtype=np.float64)
    if tau.shape != (md.n_refs,) or u.shape != (md.n_edges,):
        raise ValueError(
            f"parameter dimensions (tau {tau.shape}, u {u.shape}) do not match "
            f"data ({md.n_refs} refs, {md.n_edges} edges)"
        )
    total = float(
        normal_logpdf(params.beta0, 0.0, PRIOR_VAR)
        + halfnormal_logpdf(params.sigma2_u, PRIOR_VAR)
        + halfnormal_logpdf(params.sigma2_tau, PRIOR_VAR)
    )
    if md.n_edges:
        total += float(np.sum(binomial_loglik(md.y, md.n, u)))
        total += float(np.sum(normal_logpdf(u, tau[md.ref_of_edge], params.sigma2_u)))
    if md.n_refs:
        total += float(np.sum(normal_logpdf(tau, params.beta0, params.sigma2_tau)))
    return total


def deviance(md: ModelData, u) -> float:
    """-2 * binomial log likelihood at edge logits u (priors excluded)."""
    return -2.0 * float(np.sum(binomial_loglik(md.y, md.n, np.asarray(u))))


def deviance_intercept_only(md: ModelData, beta0: float) -> float:
    return -2.0 * float(np.sum(binomial_loglik(md.y, md.n, np.full(md.n_edges, beta0))))
