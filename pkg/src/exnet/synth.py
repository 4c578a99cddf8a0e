"""Synthetic data generator: forward simulation of the three-level model.

Draws tau_j, then u_ji, then y_ji ~ Binomial(n_ji, logistic(u_ji)), and
writes edge rows plus an institution catalog and the generating truths, so
recovery tests can compare posteriors against known parameters.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .corpus import CatalogEntry, CollabEdge, InstitutionCatalog, SubjectAreaDataset, Thresholds
from .io import write_json
from .numerics import inv_logit

COUNTRIES = [
    "USA", "DEU", "GBR", "FRA", "CHN", "JPN", "ITA", "ESP", "NLD", "CHE",
    "CAN", "AUS", "KOR", "SWE", "BRA", "IND", "DNK", "BEL", "AUT", "NOR",
]


@dataclass(frozen=True)
class SynthSpec:
    n_refs: int = 102
    mean_nets_per_ref: float = 18.2
    n_range: tuple[int, int] = (10, 200)
    beta0: float = -1.27
    sigma2_u: float = 0.14
    sigma2_tau: float = 0.32
    seed: int = 0
    subject: str = "Synthetic Area"
    nonref_pool: int | None = None

    def __post_init__(self) -> None:
        if self.n_refs < 1 or self.mean_nets_per_ref <= 0:
            raise ValueError("n_refs and mean_nets_per_ref must be positive")
        if self.n_range[0] < 1 or self.n_range[1] < self.n_range[0]:
            raise ValueError("n_range must be a valid positive interval")
        if self.sigma2_u < 0 or self.sigma2_tau < 0:
            raise ValueError("variance components must be >= 0")


@dataclass
class SynthResult:
    spec: SynthSpec
    edges: list[CollabEdge]
    catalog: InstitutionCatalog
    truth: dict

    def dataset(self) -> SubjectAreaDataset:
        """Dataset view without threshold filtering (generator output is valid)."""
        refs = {e.ref_id for e in self.edges}
        inst_ids = refs | {e.net_id for e in self.edges}
        institutions = {
            iid: self.catalog.institution(iid, self.spec.subject, iid in refs)
            for iid in inst_ids
        }
        return SubjectAreaDataset(
            subject=self.spec.subject,
            edges=sorted(self.edges, key=lambda e: (e.ref_id, e.net_id)),
            institutions=institutions,
            thresholds_applied=Thresholds(),
        )

    def write(self, out_dir: str | Path) -> dict[str, Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        edges_path = out_dir / "edges.csv"
        lines = [
            f"{self.spec.subject},{e.ref_id},{e.net_id},{e.n_papers},{e.n_top}"
            for e in sorted(self.edges, key=lambda e: (e.ref_id, e.net_id))
        ]
        edges_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

        catalog_path = out_dir / "institutions.json"
        write_json(
            [
                {
                    "inst_id": e.inst_id,
                    "name": e.name,
                    "country": e.country,
                    "lat": e.lat,
                    "lon": e.lon,
                    "total_papers_by_subject": dict(e.totals),
                }
                for _, e in sorted(self.catalog.entries.items())
            ],
            catalog_path,
        )
        truth_path = out_dir / "truth.json"
        write_json(self.truth, truth_path)
        return {"edges": edges_path, "institutions": catalog_path, "truth": truth_path}


def generate_synthetic(spec: SynthSpec, out_dir: str | Path | None = None) -> SynthResult:
    rng = np.random.default_rng(spec.seed)
    n_refs = spec.n_refs
    n_nonrefs = spec.nonref_pool
    if n_nonrefs is None:
        n_nonrefs = max(10, round(n_refs * spec.mean_nets_per_ref / 3.0))

    width = max(3, len(str(n_refs)), len(str(n_nonrefs)))
    ref_ids = [f"R{i:0{width}d}" for i in range(1, n_refs + 1)]
    nonref_ids = [f"N{i:0{width}d}" for i in range(1, n_nonrefs + 1)]
    pool = np.array(ref_ids + nonref_ids)

    tau = rng.normal(spec.beta0, math.sqrt(spec.sigma2_tau), size=n_refs)
    edges: list[CollabEdge] = []
    truth_u: dict[str, float] = {}
    n_lo, n_hi = spec.n_range
    for j, ref in enumerate(ref_ids):
        k = max(1, int(rng.poisson(spec.mean_nets_per_ref)))
        k = min(k, pool.shape[0] - 1)
        candidates = pool[pool != ref]
        partners = rng.choice(candidates, size=k, replace=False)
        for net in sorted(partners):
            u = float(rng.normal(tau[j], math.sqrt(spec.sigma2_u)))
            n = int(rng.integers(n_lo, n_hi + 1))
            y = int(rng.binomial(n, float(inv_logit(u))))
            edges.append(CollabEdge(ref_id=ref, net_id=str(net), n_papers=n, n_top=y))
            truth_u[f"{ref}|{net}"] = u

    entries = []
    for iid in ref_ids:
        entries.append(_catalog_entry(iid, rng, spec.subject, total=500 + int(rng.poisson(300))))
    for iid in nonref_ids:
        entries.append(_catalog_entry(iid, rng, spec.subject,
                                      total=min(499, 50 + int(rng.poisson(150)))))
    catalog = InstitutionCatalog(entries)

    truth = {
        "beta0": spec.beta0,
        "sigma2_u": spec.sigma2_u,
        "sigma2_tau": spec.sigma2_tau,
        "tau": {ref: float(t) for ref, t in zip(ref_ids, tau)},
        "u": truth_u,
        "spec": {**asdict(spec), "n_range": list(spec.n_range)},
    }
    result = SynthResult(spec=spec, edges=edges, catalog=catalog, truth=truth)
    if out_dir is not None:
        result.write(out_dir)
    return result


def _catalog_entry(iid: str, rng: np.random.Generator, subject: str, total: int) -> CatalogEntry:
    return CatalogEntry(
        inst_id=iid,
        name=f"Institute {iid}",
        country=COUNTRIES[int(rng.integers(0, len(COUNTRIES)))],
        lat=float(rng.uniform(-55.0, 70.0)),
        lon=float(rng.uniform(-179.9, 180.0)),
        totals={subject: total},
    )
