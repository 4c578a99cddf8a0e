"""Full model fits: single-chain fitting, random subset splitting, FIT.json."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..io import SCHEMA_VERSION, read_json, write_json
from ..kernels import BACKEND
from .model import ModelData, as_model_data
from .predict import all_edge_rates, all_ref_rates, dic, overall_rate, ref_rate_transform_of_mean
from .sampler import Chain, ChainConfig, mh_sample
from .summaries import DiagnosticsReport, PosteriorSummary, diagnostics, icc, summarize

SCALAR_PARAMS = ("beta0", "sigma2_u", "sigma2_tau")


@dataclass
class FitResult:
    subject: str
    config: ChainConfig
    backend: str
    overall_rate: float
    ref_rates: dict[str, PosteriorSummary]
    edge_rates: dict[tuple[str, str], PosteriorSummary]
    ref_rates_transform_of_mean: dict[str, float]
    # scalar posteriors; None for split fits, which report per subset + pooled
    beta0: PosteriorSummary | None = None
    sigma2_u: PosteriorSummary | None = None
    sigma2_tau: PosteriorSummary | None = None
    icc: PosteriorSummary | None = None
    icc_at_means: float | None = None
    dic: float | None = None
    p_d: float | None = None
    dic_warning: bool = False
    diagnostics: dict[str, DiagnosticsReport] = field(default_factory=dict)
    acceptance: dict[str, float] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    subsets: list[dict] | None = None
    pooled: dict | None = None

    def to_dict(self) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "subject": self.subject,
            "config": self.config.to_dict(),
            "backend": self.backend,
            "overall_rate": self.overall_rate,
            "params": {
                name: (getattr(self, name).to_dict() if getattr(self, name) else None)
                for name in (*SCALAR_PARAMS, "icc")
            },
            "icc_at_means": self.icc_at_means,
            "dic": self.dic,
            "p_d": self.p_d,
            "dic_warning": self.dic_warning,
            "ref_rates": {k: v.to_dict() for k, v in self.ref_rates.items()},
            "ref_rates_transform_of_mean": dict(self.ref_rates_transform_of_mean),
            "edge_rates": {f"{r}|{n}": v.to_dict() for (r, n), v in self.edge_rates.items()},
            "diagnostics": {k: v.to_dict() for k, v in self.diagnostics.items()},
            "acceptance": dict(self.acceptance),
            "warnings": list(self.warnings),
        }
        if self.subsets is not None:
            d["subsets"] = self.subsets
        if self.pooled is not None:
            d["pooled"] = self.pooled
        return d

    def save(self, path) -> None:
        write_json(self.to_dict(), path)

    @classmethod
    def from_dict(cls, d: dict) -> "FitResult":
        def _ps(v):
            return None if v is None else PosteriorSummary.from_dict(v)

        params = d["params"]
        return cls(
            subject=d["subject"],
            config=ChainConfig.from_dict(d["config"]),
            backend=d.get("backend", "unknown"),
            overall_rate=d["overall_rate"],
            ref_rates={k: PosteriorSummary.from_dict(v) for k, v in d["ref_rates"].items()},
            edge_rates={
                tuple(k.split("|", 1)): PosteriorSummary.from_dict(v)
                for k, v in d["edge_rates"].items()
            },
            ref_rates_transform_of_mean=d.get("ref_rates_transform_of_mean", {}),
            beta0=_ps(params["beta0"]),
            sigma2_u=_ps(params["sigma2_u"]),
            sigma2_tau=_ps(params["sigma2_tau"]),
            icc=_ps(params["icc"]),
            icc_at_means=d.get("icc_at_means"),
            dic=d.get("dic"),
            p_d=d.get("p_d"),
            dic_warning=d.get("dic_warning", False),
            diagnostics={},  # grids are plain arrays in the file; reload not needed
            acceptance=d.get("acceptance", {}),
            warnings=d.get("warnings", []),
            subsets=d.get("subsets"),
            pooled=d.get("pooled"),
        )

    @classmethod
    def load(cls, path) -> "FitResult":
        return cls.from_dict(read_json(path))


def fit(data, config: ChainConfig = ChainConfig()) -> FitResult:
    """Sample one chain and derive every posterior indicator."""
    md = as_model_data(data)
    chain = mh_sample(md, config)
    return _result_from_chain(chain)


def _result_from_chain(chain: Chain) -> FitResult:
    md = chain.data
    dic_res = dic(chain)
    return FitResult(
        subject=md.subject,
        config=chain.config,
        backend=chain.backend,
        overall_rate=overall_rate(chain),
        ref_rates=all_ref_rates(chain),
        edge_rates=all_edge_rates(chain),
        ref_rates_transform_of_mean={
            r: ref_rate_transform_of_mean(chain, r) for r in md.ref_ids
        },
        beta0=summarize(chain, "beta0"),
        sigma2_u=summarize(chain, "sigma2_u"),
        sigma2_tau=summarize(chain, "sigma2_tau"),
        icc=summarize(chain, "icc"),
        icc_at_means=icc(float(np.mean(chain.sigma2_u)), float(np.mean(chain.sigma2_tau))),
        dic=dic_res.dic,
        p_d=dic_res.p_d,
        dic_warning=dic_res.warning,
        diagnostics={name: diagnostics(chain, name) for name in SCALAR_PARAMS},
        acceptance=chain.acceptance,
        warnings=list(chain.warnings),
    )


def _partition_refs(md: ModelData, max_edges: int, seed: int) -> tuple[list[list[int]], list[str]]:
    """Random reference partition into subsets of at most max_edges edges.

    References are shuffled with a seeded generator, then packed first-fit;
    a single reference larger than max_edges gets its own subset.
    """
    rng = np.random.default_rng([seed, 0x5B17])
    order = rng.permutation(md.n_refs)
    subsets: list[list[int]] = []
    loads: list[int] = []
    warnings: list[str] = []
    for r in order:
        r = int(r)
        size = int(md.edge_count[r])
        if size > max_edges:
            subsets.append([r])
            loads.append(size)
            warnings.append(
                f"reference {md.ref_ids[r]} has {size} edges > max_edges={max_edges}; "
                "it forms its own subset"
            )
            continue
        for i, load in enumerate(loads):
            if load + size <= max_edges:
                subsets[i].append(r)
                loads[i] += size
                break
        else:
            subsets.append([r])
            loads.append(size)
    return subsets, warnings


def _subset_data(md: ModelData, refs: list[int]) -> ModelData:
    refs_sorted = sorted(refs)
    mask = np.isin(md.ref_of_edge, refs_sorted)
    idx = np.nonzero(mask)[0]
    ref_ids = [md.ref_ids[r] for r in refs_sorted]
    remap = {old: new for new, old in enumerate(refs_sorted)}
    ref_of_edge = np.array([remap[int(r)] for r in md.ref_of_edge[idx]], dtype=np.int64)
    counts = np.bincount(ref_of_edge, minlength=len(ref_ids))
    return ModelData(
        subject=md.subject,
        ref_ids=ref_ids,
        edge_keys=[md.edge_keys[i] for i in idx],
        y=md.y[idx],
        n=md.n[idx],
        ref_of_edge=ref_of_edge,
        edge_start=np.concatenate(([0], np.cumsum(counts))).astype(np.int64),
        edge_count=counts.astype(np.float64),
    )


def split_fit(data, max_edges: int, config: ChainConfig = ChainConfig()) -> FitResult:
    """Fit the model, splitting over-large datasets into random reference subsets.

    Each subset is fitted independently; per-reference and per-edge summaries
    concatenate, while scalar parameters are reported per subset plus an
    edge-count-weighted mean explicitly flagged as a pooling heuristic.
    """
    if max_edges < 1:
        raise ValueError("max_edges must be >= 1")
    md = as_model_data(data)
    if md.n_edges <= max_edges:
        return fit(md, config)

    subsets, warnings = _partition_refs(md, max_edges, config.seed)
    seed_rng = np.random.default_rng([config.seed, 0xF17])
    subset_seeds = seed_rng.integers(0, 2**63 - 1, size=len(subsets))

    results: list[FitResult] = []
    datas: list[ModelData] = []
    for refs, sub_seed in zip(subsets, subset_seeds):
        sub_md = _subset_data(md, refs)
        sub_cfg = ChainConfig(
            iterations=config.iterations,
            burn_in=config.burn_in,
            thinning=config.thinning,
            seed=int(sub_seed),
            proposal_scales=config.proposal_scales,
            adapt=config.adapt,
        )
        results.append(fit(sub_md, sub_cfg))
        datas.append(sub_md)

    weights = np.array([d.n_edges for d in datas], dtype=np.float64)
    weights /= weights.sum()

    def pooled_mean(values) -> float:
        return float(np.dot(weights, np.asarray(values, dtype=np.float64)))

    pooled = {
        "method": "edge-count-weighted mean (heuristic)",
        "beta0": pooled_mean([r.beta0.mean for r in results]),
        "sigma2_u": pooled_mean([r.sigma2_u.mean for r in results]),
        "sigma2_tau": pooled_mean([r.sigma2_tau.mean for r in results]),
        "icc": pooled_mean([r.icc.mean for r in results]),
        "dic": pooled_mean([r.dic for r in results]),
    }
    paper_totals = np.array([float(np.sum(d.n)) for d in datas])
    global_rate = float(
        np.dot(paper_totals, [r.overall_rate for r in results]) / paper_totals.sum()
    )

    ref_rates: dict[str, PosteriorSummary] = {}
    edge_rates: dict[tuple[str, str], PosteriorSummary] = {}
    tom: dict[str, float] = {}
    for r in results:
        ref_rates.update(r.ref_rates)
        edge_rates.update(r.edge_rates)
        tom.update(r.ref_rates_transform_of_mean)

    subset_records = [
        {
            "refs": d.ref_ids,
            "n_edges": d.n_edges,
            "seed": int(s),
            "params": {
                "beta0": r.beta0.to_dict(),
                "sigma2_u": r.sigma2_u.to_dict(),
                "sigma2_tau": r.sigma2_tau.to_dict(),
                "icc": r.icc.to_dict(),
            },
            "dic": r.dic,
            "p_d": r.p_d,
            "overall_rate": r.overall_rate,
        }
        for d, r, s in zip(datas, results, subset_seeds)
    ]
    all_warnings = warnings + [w for r in results for w in r.warnings]
    all_warnings.append("scalar parameters pooled across subsets: pooled (heuristic)")

    return FitResult(
        subject=md.subject,
        config=config,
        backend=BACKEND,
        overall_rate=global_rate,
        ref_rates=dict(sorted(ref_rates.items())),
        edge_rates=dict(sorted(edge_rates.items())),
        ref_rates_transform_of_mean=dict(sorted(tom.items())),
        dic_warning=any(r.dic_warning for r in results),
        warnings=all_warnings,
        subsets=subset_records,
        pooled=pooled,
    )
