"""Posterior and posterior-predictive rate estimates, overall rate, and DIC."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..numerics import inv_logit, log_binom_coeff, softplus
from .model import deviance
from .sampler import Chain
from .summaries import PosteriorSummary, _hpd_columns, goldstein_interval


def _edge_rate_draws(chain: Chain) -> np.ndarray:
    """Posterior-predictive replicate rates y_rep/n per edge, (S, E).

    Drawn once per chain from its dedicated predictive stream, so results
    do not depend on which summary is requested first.
    """
    if chain._edge_rate_draws is None:
        rng = np.random.Generator(np.random.PCG64(chain.predictive_seed))
        p = inv_logit(chain.u)
        n_int = chain.data.n.astype(np.int64)
        counts = rng.binomial(n_int[None, :], p)
        chain._edge_rate_draws = counts / chain.data.n[None, :]
    return chain._edge_rate_draws


def predict_ref_rate(chain: Chain, ref_id: str, level: float = 0.95) -> PosteriorSummary:
    """Best paper rate of a reference institution: logistic of each tau draw."""
    draws = inv_logit(chain.parameter(f"tau:{ref_id}"))
    return PosteriorSummary.from_samples(draws, level=level, clamp=(0.0, 1.0))


def ref_rate_transform_of_mean(chain: Chain, ref_id: str) -> float:
    """Secondary mode: logistic of the posterior-mean tau (back-transformation
    of the point estimate rather than the per-draw functional)."""
    return float(inv_logit(float(np.mean(chain.parameter(f"tau:{ref_id}")))))


def predict_edge_rate(chain: Chain, ref_id: str, net_id: str,
                      level: float = 0.95) -> PosteriorSummary:
    """Joint best paper rate of one dyad from posterior-predictive replicates."""
    e = chain.edge_index(ref_id, net_id)
    return PosteriorSummary.from_samples(
        _edge_rate_draws(chain)[:, e], level=level, clamp=(0.0, 1.0)
    )


def all_ref_rates(chain: Chain, level: float = 0.95) -> dict[str, PosteriorSummary]:
    rates = inv_logit(chain.tau)
    return _column_summaries(rates, chain.data.ref_ids, level)


def all_edge_rates(chain: Chain, level: float = 0.95) -> dict[tuple[str, str], PosteriorSummary]:
    return _column_summaries(_edge_rate_draws(chain), chain.data.edge_keys, level)


def _column_summaries(draws: np.ndarray, keys, level: float) -> dict:
    means = draws.mean(axis=0)
    sds = draws.std(axis=0, ddof=1) if draws.shape[0] > 1 else np.zeros(draws.shape[1])
    hpd = _hpd_columns(np.sort(draws, axis=0), level)
    out = {}
    for i, key in enumerate(keys):
        gl, gu = goldstein_interval(float(means[i]), float(sds[i]))
        out[key] = PosteriorSummary(
            mean=float(means[i]),
            sd=float(sds[i]),
            hpd_lower=max(float(hpd[0, i]), 0.0),
            hpd_upper=min(float(hpd[1, i]), 1.0),
            goldstein_lower=max(gl, 0.0),
            goldstein_upper=min(gu, 1.0),
        )
    return out


def overall_rate(chain: Chain, data=None) -> float:
    """Predicted highly-cited papers over all joint papers in the subject area."""
    md = chain.data if data is None else data
    if md.n_edges == 0:
        raise ValueError("empty dataset has no overall rate")
    rates = _edge_rate_draws(chain)
    predicted_counts = rates.mean(axis=0) * chain.data.n
    return float(np.sum(predicted_counts) / np.sum(chain.data.n))


@dataclass(frozen=True)
class DicResult:
    dic: float
    p_d: float
    warning: bool  # p_d < 0 suggests a non-normal posterior

    def to_dict(self) -> dict:
        return {"dic": self.dic, "p_d": self.p_d, "warning": self.warning}


def dic(chain: Chain, data=None) -> DicResult:
    """Deviance information criterion with the level-1 binomial focus.

    The deviance conditions on the edge effects u (priors excluded);
    p_D = mean deviance minus deviance at the posterior-mean u.
    """
    md = chain.data if data is None else data
    # the combinatorial term is draw-independent; vectorize the rest over draws
    const = float(np.sum(log_binom_coeff(md.n, md.y)))
    devs = -2.0 * (const + chain.u @ md.y - softplus(chain.u) @ md.n)
    mean_dev = float(np.mean(devs))
    dev_at_mean = deviance(md, chain.u.mean(axis=0))
    p_d = mean_dev - dev_at_mean
    return DicResult(dic=mean_dev + p_d, p_d=p_d, warning=p_d < 0)
