"""Command-line interface: per-stage subcommands plus the full pipeline."""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

from . import __version__
from .bmlr import ChainConfig, FitResult, split_fit
from .corpus import (
    InstitutionCatalog,
    SubjectAreaDataset,
    Thresholds,
    ThresholdRejection,
    build_subject_dataset,
    ingest,
    subjects_in,
)
from .encode import export_subject, save_bundle
from .io import read_json, write_json
from .layout import LayoutConfig, map_positions, remove_overlaps
from .netstats import compute_stats, save_stats
from .pipeline import (
    SEED_ENV_VAR,
    PipelineConfig,
    all_failed,
    network_positions,
    run_pipeline,
    slugify,
)
from .synth import SynthSpec, generate_synthetic


def _seed_from_env(seed: int) -> int:
    env = os.environ.get(SEED_ENV_VAR)
    return int(env) if env is not None else seed


def _cmd_ingest(args) -> int:
    result = ingest(args.input, args.format)
    for err in result.rejected:
        print(f"rejected {err}", file=sys.stderr)
    catalog = InstitutionCatalog.load(args.institutions)
    thresholds = Thresholds(args.min_ref_papers, args.min_joint, args.min_refs)
    subjects = subjects_in(result)
    if args.subject:
        subjects = [s for s in subjects if s == args.subject]
        if not subjects:
            print(f"subject not found in input: {args.subject}", file=sys.stderr)
            return 2
    out = Path(args.out)
    if len(subjects) > 1 and out.suffix:
        print("multiple subjects: --out must be a directory", file=sys.stderr)
        return 2
    wrote = 0
    for subject in subjects:
        built = build_subject_dataset(result, catalog, subject, thresholds)
        if isinstance(built, ThresholdRejection):
            print(f"{subject}: rejected: {built.failed} ({built.detail})", file=sys.stderr)
            continue
        path = out if len(subjects) == 1 and out.suffix else out / f"{slugify(subject)}.dataset.json"
        built.save(path)
        print(f"{subject}: {len(built.edges)} edges, "
              f"{len(built.reference_ids)} references -> {path}")
        wrote += 1
    return 0 if wrote else 1


def _chain_config(args) -> ChainConfig:
    return ChainConfig(
        iterations=args.iterations,
        burn_in=args.burn_in,
        thinning=args.thin,
        seed=_seed_from_env(args.seed),
    )


def _cmd_fit(args) -> int:
    dataset = SubjectAreaDataset.load(args.dataset)
    result = split_fit(dataset, args.max_edges, _chain_config(args))
    result.save(args.out)
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    dic = result.dic if result.dic is not None else result.pooled["dic"]
    print(f"{dataset.subject}: overall rate {result.overall_rate:.4f}, DIC {dic:.2f} -> {args.out}")
    return 0


def _cmd_diagnose(args) -> int:
    fit_data = read_json(args.fit)
    diag = fit_data.get("diagnostics", {}).get(args.param)
    if diag is None:
        known = ", ".join(sorted(fit_data.get("diagnostics", {})))
        print(f"no diagnostics for parameter {args.param!r} (have: {known})", file=sys.stderr)
        return 2
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["kind", "index", "x", "value"])
        for k, v in enumerate(diag["autocorrelation"]):
            writer.writerow(["autocorrelation", k, k, v])
        for k, v in enumerate(diag["trace_segment_means"]):
            writer.writerow(["trace", k, k, v])
        for k, (x, v) in enumerate(zip(diag["density_x"], diag["density_y"])):
            writer.writerow(["density", k, x, v])
        writer.writerow(["ess", 0, 0, diag["effective_sample_size"]])
    print(f"{args.param}: ESS {diag['effective_sample_size']:.1f} -> {args.out}")
    return 0


def _cmd_netstats(args) -> int:
    dataset = SubjectAreaDataset.load(args.dataset)
    stats = compute_stats(dataset)
    save_stats(dataset.subject, stats, args.out)
    print(f"{dataset.subject}: {len(stats)} nodes -> {args.out}")
    return 0


def _cmd_layout(args) -> int:
    dataset = SubjectAreaDataset.load(args.dataset)
    if args.stats:
        stats_ids = set(read_json(args.stats)["nodes"])
        missing = sorted(set(dataset.institutions) - stats_ids)
        if missing:
            print(f"stats file missing institutions: {missing[:5]}", file=sys.stderr)
            return 2
    seed = _seed_from_env(args.seed)
    geo = map_positions(dataset.institutions, seed=seed)
    if args.mode == "network":
        cfg = LayoutConfig(
            iterations=args.iterations,
            scaling=args.scaling,
            gravity=args.gravity,
            seed=seed,
        )
        positions = network_positions(dataset, geo, cfg, args.inactive)
    else:
        positions = geo
    radii = {iid: args.node_radius for iid in positions}
    positions, resolved = remove_overlaps(positions, radii, args.overlap_margin, seed=seed)
    write_json(
        {"schema_version": 1, "subject": dataset.subject, "mode": args.mode,
         "overlap_resolved": resolved,
         "positions": {k: list(v) for k, v in positions.items()}},
        args.out,
    )
    print(f"{dataset.subject}: {args.mode} layout of {len(positions)} nodes -> {args.out}")
    return 0


def _cmd_export(args) -> int:
    dataset = SubjectAreaDataset.load(args.dataset)
    fit_result = FitResult.load(args.fit)
    stats = read_json(args.stats)["nodes"]
    pos_net = {k: tuple(v) for k, v in read_json(args.layouts[0])["positions"].items()}
    pos_geo = {k: tuple(v) for k, v in read_json(args.layouts[1])["positions"].items()}
    bundle = export_subject(dataset, fit_result, stats, pos_net, pos_geo)
    save_bundle(bundle, args.out)
    print(f"{dataset.subject}: bundle with {bundle['counts']['institutions']} institutions "
          f"-> {args.out}")
    return 0


def _cmd_run(args) -> int:
    overrides = {
        key: getattr(args, key)
        for key in (
            "input", "format", "institutions", "out_dir", "seed", "iterations",
            "burn_in", "thinning", "max_edges", "adapt", "layout_iterations",
            "scaling", "gravity", "jitter_tolerance", "overlap_margin",
            "inactive", "workers", "min_ref_papers", "min_joint", "min_refs",
        )
        if getattr(args, key, None) is not None
    }
    if args.subjects:
        overrides["subjects"] = [s.strip() for s in args.subjects.split(",")]
    if args.config:
        cfg = PipelineConfig.from_file(args.config, overrides)
    else:
        cfg = PipelineConfig()
        for k, v in overrides.items():
            setattr(cfg, k, v)
        env_seed = os.environ.get(SEED_ENV_VAR)
        if env_seed is not None:
            cfg.seed = int(env_seed)
    manifest = run_pipeline(cfg)
    for subject, entry in manifest["subjects"].items():
        status = entry["status"]
        reason = f": {entry.get('reason')}" if status != "ok" else ""
        print(f"{subject}: {status}{reason}")
    return 1 if all_failed(manifest) else 0


def _cmd_synth(args) -> int:
    spec = SynthSpec(
        n_refs=args.n_refs,
        mean_nets_per_ref=args.mean_nets_per_ref,
        n_range=(args.n_min, args.n_max),
        beta0=args.beta0,
        sigma2_u=args.sigma2_u,
        sigma2_tau=args.sigma2_tau,
        seed=_seed_from_env(args.seed),
        subject=args.subject,
    )
    result = generate_synthetic(spec, args.out_dir)
    print(f"{spec.subject}: {len(result.edges)} edges, "
          f"{len(result.catalog)} institutions -> {args.out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="excellence-net",
        description="Institutional collaboration networks: model fits, network "
                    "statistics, layouts and viewer bundles.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse raw rows and build per-subject datasets")
    p.add_argument("input")
    p.add_argument("--format", choices=["papers", "edges"], required=True)
    p.add_argument("--institutions", required=True)
    p.add_argument("--subject", default=None)
    p.add_argument("--min-ref-papers", type=int, default=500, dest="min_ref_papers")
    p.add_argument("--min-joint", type=int, default=10, dest="min_joint")
    p.add_argument("--min-refs", type=int, default=50, dest="min_refs")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("fit", help="fit the three-level model by MCMC")
    p.add_argument("dataset")
    p.add_argument("--iterations", type=int, default=10_000)
    p.add_argument("--burn-in", type=int, default=1_000, dest="burn_in")
    p.add_argument("--thin", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-edges", type=int, default=50_000, dest="max_edges")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("diagnose", help="dump autocorrelation/trace/density grids as CSV")
    p.add_argument("fit")
    p.add_argument("--param", default="beta0")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_diagnose)

    p = sub.add_parser("netstats", help="graph statistics for a dataset")
    p.add_argument("dataset")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_netstats)

    p = sub.add_parser("layout", help="network or geographic node positions")
    p.add_argument("dataset")
    p.add_argument("stats", nargs="?", default=None)
    p.add_argument("--mode", choices=["network", "geographic"], default="network")
    p.add_argument("--iterations", type=int, default=1_000)
    p.add_argument("--scaling", type=float, default=2.0)
    p.add_argument("--gravity", type=float, default=1.0)
    p.add_argument("--overlap-margin", type=float, default=2.0, dest="overlap_margin")
    p.add_argument("--node-radius", type=float, default=3.0, dest="node_radius")
    p.add_argument("--inactive", choices=["simulate", "geo"], default="simulate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_layout)

    p = sub.add_parser("export", help="assemble the viewer bundle for one subject")
    p.add_argument("--dataset", required=True)
    p.add_argument("--fit", required=True)
    p.add_argument("--stats", required=True)
    p.add_argument("--layouts", nargs=2, required=True, metavar=("POS_NET", "POS_GEO"))
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("run", help="run the whole pipeline from a config file")
    p.add_argument("--config", default=None)
    p.add_argument("--input", default=None)
    p.add_argument("--format", choices=["papers", "edges"], default=None)
    p.add_argument("--institutions", default=None)
    p.add_argument("--out-dir", default=None, dest="out_dir")
    p.add_argument("--subjects", default=None, help="comma-separated allowlist")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--iterations", type=int, default=None)
    p.add_argument("--burn-in", type=int, default=None, dest="burn_in")
    p.add_argument("--thinning", type=int, default=None)
    p.add_argument("--max-edges", type=int, default=None, dest="max_edges")
    p.add_argument("--adapt", action="store_true", default=None)
    p.add_argument("--no-adapt", action="store_false", dest="adapt")
    p.add_argument("--layout-iterations", type=int, default=None, dest="layout_iterations")
    p.add_argument("--scaling", type=float, default=None)
    p.add_argument("--gravity", type=float, default=None)
    p.add_argument("--jitter-tolerance", type=float, default=None, dest="jitter_tolerance")
    p.add_argument("--overlap-margin", type=float, default=None, dest="overlap_margin")
    p.add_argument("--inactive", choices=["simulate", "geo"], default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--min-ref-papers", type=int, default=None, dest="min_ref_papers")
    p.add_argument("--min-joint", type=int, default=None, dest="min_joint")
    p.add_argument("--min-refs", type=int, default=None, dest="min_refs")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("synth", help="generate synthetic data with known truths")
    p.add_argument("--n-refs", type=int, default=102, dest="n_refs")
    p.add_argument("--mean-nets-per-ref", type=float, default=18.2, dest="mean_nets_per_ref")
    p.add_argument("--n-min", type=int, default=10, dest="n_min")
    p.add_argument("--n-max", type=int, default=200, dest="n_max")
    p.add_argument("--beta0", type=float, default=-1.27)
    p.add_argument("--sigma2-u", type=float, default=0.14, dest="sigma2_u")
    p.add_argument("--sigma2-tau", type=float, default=0.32, dest="sigma2_tau")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--subject", default="Synthetic Area")
    p.add_argument("--out-dir", required=True, dest="out_dir")
    p.set_defaults(func=_cmd_synth)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
