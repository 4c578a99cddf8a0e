"""End-to-end pipeline: ingest -> fit -> netstats -> layouts -> bundles.

Each subject area runs in isolation; one subject's failure never touches
another's outputs. Every stage's output is persisted so any stage can be
re-run on its own, and the manifest records seeds, thresholds, durations
and per-subject outcomes.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .bmlr import ChainConfig, split_fit
from .corpus import (
    InstitutionCatalog,
    SubjectAreaDataset,
    Thresholds,
    ThresholdRejection,
    build_subject_dataset,
    ingest,
    subjects_in,
)
from .encode import export_subject, radius_for, save_bundle
from .io import write_json
from .kernels import BACKEND
from .layout import LayoutConfig, fa2_layout, map_positions, remove_overlaps
from .netstats import build_graph, compute_stats, save_stats

SEED_ENV_VAR = "EXNET_SEED"

_BOOL_KEYS = {"adapt"}
_INT_KEYS = {
    "min_ref_papers", "min_joint", "min_refs",
    "iterations", "burn_in", "thinning", "seed", "max_edges",
    "layout_iterations", "overlap_passes", "workers",
}
_FLOAT_KEYS = {"scaling", "gravity", "jitter_tolerance", "overlap_margin"}
_LIST_KEYS = {"subjects"}


@dataclass
class PipelineConfig:
    input: str = ""
    format: str = "edges"  # "papers" | "edges"
    institutions: str = ""
    out_dir: str = "out"
    subjects: list[str] | None = None
    min_ref_papers: int = 500
    min_joint: int = 10
    min_refs: int = 50
    iterations: int = 10_000
    burn_in: int = 1_000
    thinning: int = 2
    seed: int = 0
    max_edges: int = 50_000
    adapt: bool = True
    layout_iterations: int = 1_000
    scaling: float = 2.0
    gravity: float = 1.0
    jitter_tolerance: float = 1.0
    overlap_margin: float = 2.0
    inactive: str = "simulate"  # inactive institutions: "simulate" | "geo"
    workers: int = 1

    def thresholds(self) -> Thresholds:
        return Thresholds(self.min_ref_papers, self.min_joint, self.min_refs)

    @classmethod
    def from_file(cls, path: str | Path, overrides: dict | None = None) -> "PipelineConfig":
        values = parse_config_file(path)
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        env_seed = os.environ.get(SEED_ENV_VAR)
        if env_seed is not None:
            values["seed"] = int(env_seed)
        cfg = cls()
        for key, value in values.items():
            if not hasattr(cfg, key):
                raise ValueError(f"unknown config key: {key}")
            setattr(cfg, key, _coerce(key, value))
        return cfg


def _coerce(key: str, value):
    if isinstance(value, str):
        if key in _BOOL_KEYS:
            return value.strip().lower() in ("1", "true", "yes", "on")
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _LIST_KEYS:
            return [s.strip() for s in value.split(",") if s.strip()]
    return value


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Flat key = value lines; '#' starts a comment."""
    out: dict[str, str] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line (expected key = value): {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def slugify(subject: str) -> str:
    return "".join(c if c.isalnum() else "-" for c in subject.lower()).strip("-") or "subject"


def subject_seed(base_seed: int, subject: str) -> int:
    digest = zlib_crc(subject)
    return int(np.random.SeedSequence(entropy=base_seed, spawn_key=(digest,)).generate_state(1)[0])


def zlib_crc(s: str) -> int:
    import zlib

    return zlib.crc32(s.encode("utf-8"))


def network_positions(
    dataset: SubjectAreaDataset,
    geo_init: dict[str, tuple[float, float]],
    layout_cfg: LayoutConfig,
    inactive: str = "simulate",
) -> dict[str, tuple[float, float]]:
    """Force-directed positions, with inactive (non-reference) institutions
    either participating in the simulation or held at their map positions."""
    if inactive == "simulate":
        return fa2_layout(build_graph(dataset), geo_init, layout_cfg)
    if inactive != "geo":
        raise ValueError(f"inactive must be 'simulate' or 'geo', got {inactive!r}")
    refs = {iid for iid, inst in dataset.institutions.items() if inst.is_reference}
    ref_edges = [e for e in dataset.edges if e.ref_id in refs and e.net_id in refs]
    graph = build_graph(ref_edges, extra_nodes=refs)
    positions = dict(geo_init)
    positions.update(fa2_layout(graph, {iid: geo_init[iid] for iid in graph.nodes}, layout_cfg))
    return positions


def run_subject(
    dataset: SubjectAreaDataset,
    cfg: PipelineConfig,
    seed: int,
    subject_dir: Path,
    bundle_path: Path,
) -> dict:
    """All post-ingest stages for one subject; returns its manifest entry."""
    durations: dict[str, float] = {}
    entry: dict = {"status": "ok", "seed": seed, "durations": durations, "outputs": {}}

    t0 = time.perf_counter()
    dataset.save(subject_dir / "dataset.json")
    durations["dataset"] = time.perf_counter() - t0
    entry["outputs"]["dataset"] = str(subject_dir / "dataset.json")

    t0 = time.perf_counter()
    chain_cfg = ChainConfig(
        iterations=cfg.iterations,
        burn_in=cfg.burn_in,
        thinning=cfg.thinning,
        seed=seed,
        adapt=cfg.adapt,
    )
    fit_result = split_fit(dataset, cfg.max_edges, chain_cfg)
    fit_result.save(subject_dir / "fit.json")
    durations["fit"] = time.perf_counter() - t0
    entry["outputs"]["fit"] = str(subject_dir / "fit.json")

    t0 = time.perf_counter()
    stats = compute_stats(dataset)
    save_stats(dataset.subject, stats, subject_dir / "stats.json")
    durations["netstats"] = time.perf_counter() - t0
    entry["outputs"]["stats"] = str(subject_dir / "stats.json")

    t0 = time.perf_counter()
    layout_cfg = LayoutConfig(
        iterations=cfg.layout_iterations,
        scaling=cfg.scaling,
        gravity=cfg.gravity,
        jitter_tolerance=cfg.jitter_tolerance,
        overlap_margin=cfg.overlap_margin,
        seed=seed,
    )
    geo_init = map_positions(dataset.institutions, seed=seed)
    # overlap radii follow the overview (betweenness) sizing, in layout units
    max_bw = max((stats[iid]["betweenness"] for iid in dataset.institutions), default=0.0)
    radii = {
        iid: radius_for(stats[iid]["betweenness"], max_bw) for iid in dataset.institutions
    }
    pos_net = network_positions(dataset, geo_init, layout_cfg, cfg.inactive)
    pos_net, net_resolved = remove_overlaps(pos_net, radii, cfg.overlap_margin, seed=seed)
    pos_geo, geo_resolved = remove_overlaps(geo_init, radii, cfg.overlap_margin, seed=seed)
    write_json(
        {"schema_version": 1, "subject": dataset.subject, "mode": "network",
         "overlap_resolved": net_resolved,
         "positions": {k: list(v) for k, v in pos_net.items()}},
        subject_dir / "pos_net.json",
    )
    write_json(
        {"schema_version": 1, "subject": dataset.subject, "mode": "geographic",
         "overlap_resolved": geo_resolved,
         "positions": {k: list(v) for k, v in pos_geo.items()}},
        subject_dir / "pos_geo.json",
    )
    durations["layout"] = time.perf_counter() - t0
    entry["outputs"]["pos_net"] = str(subject_dir / "pos_net.json")
    entry["outputs"]["pos_geo"] = str(subject_dir / "pos_geo.json")

    t0 = time.perf_counter()
    bundle = export_subject(dataset, fit_result, stats, pos_net, pos_geo)
    save_bundle(bundle, bundle_path)
    durations["export"] = time.perf_counter() - t0
    entry["outputs"]["bundle"] = str(bundle_path)
    return entry


def _run_subject_isolated(args) -> tuple[str, dict]:
    subject, dataset_dict, cfg, seed, subject_dir, bundle_path = args
    dataset = SubjectAreaDataset.from_dict(dataset_dict)
    try:
        entry = run_subject(dataset, cfg, seed, Path(subject_dir), Path(bundle_path))
    except Exception as exc:  # per-subject isolation: record, do not propagate
        entry = {"status": "error", "reason": f"{type(exc).__name__}: {exc}", "seed": seed}
    return subject, entry


def run_pipeline(cfg: PipelineConfig) -> dict:
    """Run every accepted subject area and write bundles plus a run manifest."""
    started = datetime.now(timezone.utc).isoformat()
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    ingested = ingest(cfg.input, cfg.format)
    catalog = InstitutionCatalog.load(cfg.institutions)
    subjects = subjects_in(ingested)
    if cfg.subjects:
        allow = set(cfg.subjects)
        subjects = [s for s in subjects if s in allow]

    manifest: dict = {
        "schema_version": 1,
        "package_version": __version__,
        "backend": BACKEND,
        "seed": cfg.seed,
        "thresholds": {
            "min_ref_papers": cfg.min_ref_papers,
            "min_joint": cfg.min_joint,
            "min_refs": cfg.min_refs,
        },
        "chain": {"iterations": cfg.iterations, "burn_in": cfg.burn_in,
                  "thinning": cfg.thinning, "max_edges": cfg.max_edges},
        "rejected_rows": [str(r) for r in ingested.rejected],
        "subjects": {},
        "started": started,
    }

    jobs = []
    for subject in subjects:
        seed = subject_seed(cfg.seed, subject)
        built = build_subject_dataset(ingested, catalog, subject, cfg.thresholds())
        if isinstance(built, ThresholdRejection):
            manifest["subjects"][subject] = {
                "status": "rejected",
                "reason": built.failed,
                "detail": built.detail,
                "seed": seed,
            }
            continue
        slug = slugify(subject)
        subject_dir = out_dir / slug
        subject_dir.mkdir(parents=True, exist_ok=True)
        bundle_path = out_dir / f"{slug}.bundle.json"
        jobs.append((subject, built.to_dict(), cfg, seed, str(subject_dir), str(bundle_path)))

    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for subject, entry in pool.map(_run_subject_isolated, jobs):
                manifest["subjects"][subject] = entry
    else:
        for job in jobs:
            subject, entry = _run_subject_isolated(job)
            manifest["subjects"][subject] = entry

    index = {
        "schema_version": 1,
        "subjects": [
            {"subject": s, "bundle": f"{slugify(s)}.bundle.json"}
            for s in subjects
            if manifest["subjects"].get(s, {}).get("status") == "ok"
        ],
    }
    write_json(index, out_dir / "index.json")
    manifest["finished"] = datetime.now(timezone.utc).isoformat()
    write_json(manifest, out_dir / "run_manifest.json")
    return manifest


def all_failed(manifest: dict) -> bool:
    entries = manifest.get("subjects", {})
    if not entries:
        return True
    return all(e.get("status") != "ok" for e in entries.values())
