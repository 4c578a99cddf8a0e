"""Metropolis-Hastings sampler for the three-level model.

A single chain is a deterministic function of (data, config): the driver
draws all proposal noise from one seeded Generator and hands it to the
active sweep kernel, so rerunning with the same seed reproduces the chain
bit for bit on a given backend. Proposal scales adapt toward a 20-50%
acceptance band during burn-in only and are frozen afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ..kernels import BACKEND
from ..kernels import mh as mh_kernels
from ..numerics import log_binom_coeff, logit, softplus
from .model import ModelData, as_model_data, deviance_intercept_only, normal_logpdf, PRIOR_VAR

DEFAULT_SCALES: Mapping[str, float] = {
    "beta0": 0.10,
    "tau": 0.25,
    "u": 0.60,
    "sigma2_u": 0.40,
    "sigma2_tau": 0.50,
}

ACCEPT_TARGET = 0.35          # middle of the 20-50% band
ACCEPT_BAND = (0.20, 0.50)
ACCEPT_WARN = (0.10, 0.80)    # outside this, the chain gets a warning
ADAPT_WINDOW = 100


@dataclass(frozen=True)
class ChainConfig:
    iterations: int = 10_000
    burn_in: int = 1_000
    thinning: int = 2
    seed: int = 0
    proposal_scales: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_SCALES))
    adapt: bool = True

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not 0 <= self.burn_in < self.iterations:
            raise ValueError("burn_in must satisfy 0 <= burn_in < iterations")
        if self.thinning < 1:
            raise ValueError("thinning must be >= 1")
        for k, v in self.proposal_scales.items():
            if k not in DEFAULT_SCALES:
                raise ValueError(f"unknown proposal block: {k}")
            if v <= 0:
                raise ValueError(f"proposal scale for {k} must be positive")

    @property
    def retained(self) -> int:
        return (self.iterations - self.burn_in) // self.thinning

    def scale(self, block: str) -> float:
        return float(self.proposal_scales.get(block, DEFAULT_SCALES[block]))

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "burn_in": self.burn_in,
            "thinning": self.thinning,
            "seed": self.seed,
            "proposal_scales": {k: self.scale(k) for k in DEFAULT_SCALES},
            "adapt": self.adapt,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ChainConfig":
        return cls(
            iterations=d["iterations"],
            burn_in=d["burn_in"],
            thinning=d["thinning"],
            seed=d["seed"],
            proposal_scales=d.get("proposal_scales", dict(DEFAULT_SCALES)),
            adapt=d.get("adapt", True),
        )


@dataclass
class Chain:
    """Retained draws of every model parameter plus bookkeeping."""

    data: ModelData
    config: ChainConfig
    beta0: np.ndarray       # (S,)
    sigma2_u: np.ndarray    # (S,)
    sigma2_tau: np.ndarray  # (S,)
    tau: np.ndarray         # (S, R)
    u: np.ndarray           # (S, E)
    acceptance: dict[str, float]
    warnings: list[str]
    backend: str = BACKEND
    _edge_rate_draws: np.ndarray | None = None  # lazy posterior-predictive cache

    @property
    def retained(self) -> int:
        return self.beta0.shape[0]

    @property
    def predictive_seed(self) -> np.random.SeedSequence:
        # dedicated stream so predictive draws never depend on call order
        return np.random.SeedSequence(entropy=self.config.seed, spawn_key=(1,))

    def ref_index(self, ref_id: str) -> int:
        try:
            return self.data.ref_ids.index(ref_id)
        except ValueError:
            raise KeyError(f"unknown reference institution: {ref_id}")

    def edge_index(self, ref_id: str, net_id: str) -> int:
        try:
            return self.data.edge_keys.index((ref_id, net_id))
        except ValueError:
            raise KeyError(f"unknown edge: ({ref_id}, {net_id})")

    def parameter(self, selector: str) -> np.ndarray:
        """Resolve a selector to its retained draws.

        Selectors: "beta0", "sigma2_u", "sigma2_tau", "icc",
        "tau:<ref_id>", "u:<ref_id>:<net_id>".
        """
        if selector == "beta0":
            return self.beta0
        if selector == "sigma2_u":
            return self.sigma2_u
        if selector == "sigma2_tau":
            return self.sigma2_tau
        if selector == "icc":
            from .summaries import icc
            return icc(self.sigma2_u, self.sigma2_tau)
        if selector.startswith("tau:"):
            return self.tau[:, self.ref_index(selector[4:])]
        if selector.startswith("u:"):
            parts = selector.split(":")
            if len(parts) != 3:
                raise KeyError(f"bad edge selector: {selector}")
            return self.u[:, self.edge_index(parts[1], parts[2])]
        raise KeyError(f"unknown parameter selector: {selector}")


def _initial_state(md: ModelData) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    u0 = logit((md.y + 0.5) / (md.n + 1.0))
    tau0 = np.add.reduceat(u0, md.edge_start[:-1]) / md.edge_count
    beta0 = float(np.mean(tau0))
    s2u = max(float(np.var(u0 - tau0[md.ref_of_edge])), 1e-2)
    s2t = max(float(np.var(tau0)), 1e-2)
    return u0, tau0, np.array([beta0, s2u, s2t], dtype=np.float64)


def _adapt(scale: np.ndarray, acc: np.ndarray, window: int) -> None:
    rate = acc / float(window)
    factor = np.clip(np.exp(1.5 * (rate - ACCEPT_TARGET)), 0.5, 2.0)
    np.multiply(scale, factor, out=scale)
    np.clip(scale, 1e-4, 50.0, out=scale)


def mh_sample(data, config: ChainConfig = ChainConfig()) -> Chain:
    """Run one seeded chain and return the retained draws."""
    md = as_model_data(data)
    if md.n_edges == 0 or md.n_refs == 0:
        raise ValueError("dataset must contain at least one edge and one reference")

    n_edges, n_refs = md.n_edges, md.n_refs
    block = n_edges + n_refs + 3
    rng = np.random.default_rng(config.seed)

    u, tau, scalars = _initial_state(md)
    sp_u = softplus(u)

    scale_u = np.full(n_edges, config.scale("u"))
    scale_tau = np.full(n_refs, config.scale("tau"))
    scale_scalars = np.array(
        [config.scale("beta0"), config.scale("sigma2_u"), config.scale("sigma2_tau")]
    )

    acc_u = np.zeros(n_edges, dtype=np.int64)
    acc_tau = np.zeros(n_refs, dtype=np.int64)
    acc_scalars = np.zeros(3, dtype=np.int64)

    retained = config.retained
    out_beta0 = np.empty(retained)
    out_s2u = np.empty(retained)
    out_s2t = np.empty(retained)
    out_tau = np.empty((retained, n_refs))
    out_u = np.empty((retained, n_edges))

    sweep = mh_kernels.mh_sweep
    keep = 0
    for t in range(1, config.iterations + 1):
        z = rng.standard_normal(block)
        lunif = np.log(rng.random(block))
        sweep(
            u, sp_u, tau, scalars,
            md.y, md.n, md.ref_of_edge, md.edge_start, md.edge_count,
            z, lunif,
            scale_u, scale_tau, scale_scalars,
            acc_u, acc_tau, acc_scalars,
        )
        if config.adapt and t <= config.burn_in and t % ADAPT_WINDOW == 0:
            _adapt(scale_u, acc_u, ADAPT_WINDOW)
            _adapt(scale_tau, acc_tau, ADAPT_WINDOW)
            _adapt(scale_scalars, acc_scalars, ADAPT_WINDOW)
            acc_u[:] = 0
            acc_tau[:] = 0
            acc_scalars[:] = 0
        if t == config.burn_in:
            acc_u[:] = 0
            acc_tau[:] = 0
            acc_scalars[:] = 0
        if t > config.burn_in and (t - config.burn_in) % config.thinning == 0:
            out_beta0[keep] = scalars[0]
            out_s2u[keep] = scalars[1]
            out_s2t[keep] = scalars[2]
            out_tau[keep] = tau
            out_u[keep] = u
            keep += 1

    post = config.iterations - config.burn_in
    acceptance = {
        "u": float(np.mean(acc_u)) / post,
        "tau": float(np.mean(acc_tau)) / post,
        "beta0": float(acc_scalars[0]) / post,
        "sigma2_u": float(acc_scalars[1]) / post,
        "sigma2_tau": float(acc_scalars[2]) / post,
    }
    warnings = [
        f"acceptance rate for block '{name}' is {rate:.3f}, outside the "
        f"{ACCEPT_BAND[0]:.2f}-{ACCEPT_BAND[1]:.2f} target band after adaptation"
        for name, rate in acceptance.items()
        if not ACCEPT_WARN[0] <= rate <= ACCEPT_WARN[1]
    ]
    return Chain(
        data=md,
        config=config,
        beta0=out_beta0,
        sigma2_u=out_s2u,
        sigma2_tau=out_s2t,
        tau=out_tau,
        u=out_u,
        acceptance=acceptance,
        warnings=warnings,
    )


def sample_chains(data, config: ChainConfig = ChainConfig(), n_chains: int = 4) -> list[Chain]:
    """Independent chains differing only by seed, for between-chain diagnostics."""
    if n_chains < 1:
        raise ValueError("n_chains must be >= 1")
    seeds = np.random.default_rng([config.seed, 0xC4A1]).integers(0, 2**63 - 1, size=n_chains)
    chains = []
    for seed in seeds:
        cfg = ChainConfig(
            iterations=config.iterations,
            burn_in=config.burn_in,
            thinning=config.thinning,
            seed=int(seed),
            proposal_scales=config.proposal_scales,
            adapt=config.adapt,
        )
        chains.append(mh_sample(data, cfg))
    return chains


@dataclass
class InterceptOnlyFit:
    """Reduced model y_e ~ Binomial(n_e, logistic(beta0)): draws and DIC."""

    beta0: np.ndarray
    dic: float
    p_d: float
    acceptance: float


def fit_intercept_only(data, config: ChainConfig = ChainConfig()) -> InterceptOnlyFit:
    """Sample the intercept-only model; the DIC baseline for model comparison."""
    md = as_model_data(data)
    if md.n_edges == 0:
        raise ValueError("dataset must contain at least one edge")
    rng = np.random.default_rng(config.seed)
    y_tot = float(np.sum(md.y))
    n_tot = float(np.sum(md.n))

    def logpost(b: float) -> float:
        return y_tot * b - n_tot * float(softplus(b)) + float(normal_logpdf(b, 0.0, PRIOR_VAR))

    b = float(logit(np.clip(y_tot / n_tot, 1e-6, 1 - 1e-6)))
    lp = logpost(b)
    scale = config.scale("beta0")
    retained = config.retained
    draws = np.empty(retained)
    keep = 0
    accepted = 0
    window_acc = 0
    for t in range(1, config.iterations + 1):
        prop = b + scale * rng.standard_normal()
        lp_prop = logpost(prop)
        if np.log(rng.random()) < lp_prop - lp:
            b, lp = prop, lp_prop
            accepted += 1
            window_acc += 1
        if config.adapt and t <= config.burn_in and t % ADAPT_WINDOW == 0:
            rate = window_acc / ADAPT_WINDOW
            scale *= float(np.clip(np.exp(1.5 * (rate - ACCEPT_TARGET)), 0.5, 2.0))
            window_acc = 0
        if t == config.burn_in:
            accepted = 0
        if t > config.burn_in and (t - config.burn_in) % config.thinning == 0:
            draws[keep] = b
            keep += 1

    const = float(np.sum(log_binom_coeff(md.n, md.y)))
    devs = -2.0 * (const + draws * y_tot - softplus(draws) * n_tot)
    mean_dev = float(np.mean(devs))
    dev_at_mean = deviance_intercept_only(md, float(np.mean(draws)))
    p_d = mean_dev - dev_at_mean
    return InterceptOnlyFit(
        beta0=draws,
        dic=mean_dev + p_d,
        p_d=p_d,
        acceptance=accepted / (config.iterations - config.burn_in),
    )
