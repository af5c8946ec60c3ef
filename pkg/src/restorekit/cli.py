"""Command-line entry point.

One subcommand per pipeline stage; every run writes its outputs under --out
(or $RESTOREKIT_OUT/<command>) plus a machine-readable result.json. Exit
codes: 0 success, 1 domain error, 2 usage error.
"""

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import RunConfig, read_manifest, split_dataset
from .core.config import parse_override
from .core.manifest import GeneratorParams
from .datagen import build_paired_dataset, builtin_name_pool, load_name_pool, oracle_backends
from .datagen.prompts import DEFAULT_TEMPLATE
from .diversity import (
    MetadataAttributeClassifier,
    classify_corpus,
    compare_distributions,
    project_embeddings,
    summarize_distribution,
    write_diversity_report,
)
from .errors import ToolkitError
from .evaluation import (
    MetricReport,
    QualityRow,
    TimingTable,
    benchmark_inference,
    fid_diff,
    psnr,
    ssim,
    write_metrics_report,
    write_timing_csv,
)
from .features import RandomFeatureEmbedder
from .inference import load_enhancement_head
from .reference import quality_reference_report, timing_reference_table
from .training import GridSpec, grid_search, train_cyclegan, train_pairwise
from .training.data import load_image_dir, load_paired_arrays

OUT_ENV = "RESTOREKIT_OUT"


def _out_dir(args, command: str) -> Path:
    if args.out:
        out = Path(args.out)
    else:
        root = os.environ.get(OUT_ENV, "out")
        out = Path(root) / command
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_result(out_dir: Path, payload: dict) -> Path:
    path = out_dir / "result.json"
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path


def _parse_size(text: str) -> tuple:
    parts = text.lower().split("x")
    if len(parts) == 1:
        side = int(parts[0])
        return side, side
    if len(parts) == 2:
        return int(parts[0]), int(parts[1])
    raise ValueError(f"bad size {text!r}; use H or HxW")


def _parse_float_list(text: str):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _load_config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if getattr(args, "config", None) else RunConfig()
    overrides = {}
    for item in getattr(args, "set", None) or []:
        key, value = parse_override(item)
        overrides[key] = value
    return cfg.with_overrides(overrides) if overrides else cfg


def _backend(name: str):
    if name == "oracle-degraded":
        return oracle_backends()[0]
    if name == "oracle-clean":
        return oracle_backends()[1]
    raise ToolkitError(f"unknown backend {name!r}; built-in backends: oracle-degraded, oracle-clean")


# --- subcommand handlers ---

def cmd_dataset_build(args) -> int:
    out = _out_dir(args, "dataset")
    names = load_name_pool(args.names) if args.names else builtin_name_pool()
    manifest = build_paired_dataset(
        _backend(args.backend_a),
        _backend(args.backend_b),
        names,
        count=args.count,
        size=_parse_size(args.size),
        seed=args.seed,
        out_dir=out,
        refine_params=GeneratorParams(args.guidance, args.strength, args.steps),
        template=args.template,
    )
    _write_result(out, {
        "command": args.command,
        "count": len(manifest),
        "manifest": str(out / "manifest.jsonl"),
        "seed": args.seed,
    })
    print(f"{args.command}: {len(manifest)} pairs -> {out}")
    return 0


def cmd_dataset_oracle(args) -> int:
    args.backend_a = "oracle-degraded"
    args.backend_b = "oracle-clean"
    return cmd_dataset_build(args)


def cmd_diversity(args) -> int:
    out = _out_dir(args, "diversity")
    manifest = read_manifest(args.manifest)
    sidecar = args.attributes or (Path(args.manifest).parent / "attributes.jsonl")
    classifier = MetadataAttributeClassifier.from_sidecar(sidecar)
    records = classify_corpus(manifest, classifier, domain=args.domain)
    dist = summarize_distribution(records)
    distributions = {"primary": dist}
    tv = None
    if args.compare_manifest:
        other = read_manifest(args.compare_manifest)
        other_sidecar = args.compare_attributes or (
            Path(args.compare_manifest).parent / "attributes.jsonl"
        )
        other_classifier = MetadataAttributeClassifier.from_sidecar(other_sidecar)
        other_dist = summarize_distribution(classify_corpus(other, other_classifier, args.domain))
        distributions["comparison"] = other_dist
        tv = compare_distributions(dist, other_dist)
    report_path = write_diversity_report(distributions, out / "diversity_report.csv", tv)

    result = {"command": "diversity", "report": str(report_path), "samples": len(records)}
    if tv:
        result["tv_distance"] = tv
    if args.embed:
        embedder = RandomFeatureEmbedder()
        from .core.images import load_image

        vectors = np.stack([
            embedder.embed(load_image(
                manifest.resolve_source(s) if args.domain == "A" else manifest.resolve_target(s)
            ))
            for s in manifest
        ])
        points = project_embeddings(
            vectors, perplexity=args.perplexity, iterations=args.iterations, seed=args.seed
        )
        pts_path = out / "tsne_points.csv"
        lines = ["id,x,y"] + [
            f"{s.id},{p[0]:.6g},{p[1]:.6g}" for s, p in zip(manifest, points)
        ]
        pts_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        result["tsne_points"] = str(pts_path)
        if args.plots:
            from .evaluation.report import plot_scatter

            result["tsne_plot"] = str(
                plot_scatter(points, ["sample"] * len(points), out / "tsne.png")
            )
    _write_result(out, result)
    print(f"diversity: {len(records)} records -> {report_path}")
    return 0


def cmd_train_pairwise(args) -> int:
    out = _out_dir(args, "train-pairwise")
    cfg = _load_config(args)
    if args.seed is not None:
        cfg = cfg.with_overrides({"train.seed": args.seed})
    if args.max_epochs is not None:
        cfg = cfg.with_overrides({"train.max_epochs": args.max_epochs})
    manifest = read_manifest(args.manifest)
    ratios = _parse_float_list(args.ratios)
    train_m, val_m, _ = split_dataset(manifest, ratios, seed=int(cfg.get("train.seed", 0)))
    stem, record = train_pairwise(cfg, train_m, val_m, out_dir=out)
    _write_result(out, {
        "command": "train-pairwise",
        "best_val_loss": record.best_loss,
        "epochs_run": record.epochs_run,
        "checkpoint": str(stem),
        "hyperparams": record.hyperparams,
        "seconds": record.seconds,
    })
    print(f"train-pairwise: best val loss {record.best_loss:.4f} "
          f"after {record.epochs_run} epochs -> {stem}")
    return 0


def cmd_train_cyclegan(args) -> int:
    out = _out_dir(args, "train-cyclegan")
    cfg = _load_config(args)
    overrides = {}
    if args.lambda_cycle is not None:
        overrides["loss.lambda_cycle"] = args.lambda_cycle
    if args.lr is not None:
        overrides["optim.lr"] = args.lr
    if args.esa:
        overrides["model.use_esa"] = True
    if args.seed is not None:
        overrides["train.seed"] = args.seed
    if args.max_epochs is not None:
        overrides["train.max_epochs"] = args.max_epochs
    if overrides:
        cfg = cfg.with_overrides(overrides)
    stem, record = train_cyclegan(cfg, args.domain_a, args.domain_b, out_dir=out)
    _write_result(out, {
        "command": "train-cyclegan",
        "best_val_loss": record.best_loss,
        "full_cycle_ssim": record.ssim_full_cycle,
        "epochs_run": record.epochs_run,
        "checkpoint": str(stem),
        "hyperparams": record.hyperparams,
        "seconds": record.seconds,
    })
    print(f"train-cyclegan: best L {record.best_loss:.4f}, "
          f"full-cycle SSIM {record.ssim_full_cycle:.4f} -> {stem}")
    return 0


def cmd_grid(args) -> int:
    out = _out_dir(args, "grid")
    cfg = _load_config(args)
    if args.esa:
        cfg = cfg.with_overrides({"model.use_esa": True})
    if args.seed is not None:
        cfg = cfg.with_overrides({"train.seed": args.seed})
    if args.max_epochs is not None:
        cfg = cfg.with_overrides({"train.max_epochs": args.max_epochs})
    spec = GridSpec(
        lambda_values=_parse_float_list(args.lambda_values),
        lr_values=_parse_float_list(args.lr_values),
    )
    ranked, failures = grid_search(spec, args.domain_a, args.domain_b, cfg, out_dir=out)
    _write_result(out, {
        "command": "grid",
        "cells": len(spec.cells()),
        "completed": len(ranked),
        "failed": len(failures),
        "summary": str(out / "grid_summary.csv"),
        "winner": None if not ranked else {
            "lambda_cycle": ranked[0].hyperparams["lambda_cycle"],
            "lr": ranked[0].hyperparams["lr"],
            "best_loss": ranked[0].best_loss,
            "ssim_full_cycle": ranked[0].ssim_full_cycle,
        },
    })
    if ranked:
        w = ranked[0]
        print(f"grid: winner lambda={w.hyperparams['lambda_cycle']:g} "
              f"lr={w.hyperparams['lr']:g} L={w.best_loss:.4f} "
              f"({len(ranked)}/{len(spec.cells())} cells ok)")
    else:
        print(f"grid: all {len(spec.cells())} cells failed")
    return 0 if ranked else 1


def cmd_eval_fid_diff(args) -> int:
    out = _out_dir(args, "eval-fid-diff")
    images, _ = load_image_dir(args.images)
    ref_schnell, _ = load_image_dir(args.ref_schnell)
    ref_dev, _ = load_image_dir(args.ref_dev)
    images = list(images)
    if args.checkpoint:
        head, description = load_enhancement_head(args.checkpoint)
        images = [head(img) for img in images]
        print(f"eval-fid-diff: enhanced {len(images)} images with {description}")
    embedder = RandomFeatureEmbedder()
    fid_s, fid_d, diff = fid_diff(images, list(ref_schnell), list(ref_dev), embedder)
    report = MetricReport(
        [QualityRow(variant=args.variant, fid_schnell=fid_s, fid_dev=fid_d)],
        note=f"desk-scale embedder: {embedder.descriptor}",
    )
    report_path = write_metrics_report(report, out / "metrics_report.csv")
    _write_result(out, {
        "command": "eval-fid-diff",
        "variant": args.variant,
        "fid_schnell": fid_s,
        "fid_dev": fid_d,
        "fid_diff": diff,
        "report": str(report_path),
    })
    print(f"eval-fid-diff[{args.variant}]: fid_schnell {fid_s:.4f}, "
          f"fid_dev {fid_d:.4f}, fid_diff {diff:+.4f}")
    return 0


def cmd_eval_pair(args) -> int:
    out = _out_dir(args, "eval-pair")
    manifest = read_manifest(args.manifest)
    sources, targets = load_paired_arrays(manifest)
    head, description = load_enhancement_head(args.checkpoint)
    rows = ["id,ssim_enhanced,psnr_enhanced,ssim_source,psnr_source"]
    ssim_enh, ssim_src = [], []
    for sample, x, y in zip(manifest, sources, targets):
        z = head(x)
        se, pe = ssim(z, y), psnr(z, y)
        ss, ps = ssim(x, y), psnr(x, y)
        ssim_enh.append(se)
        ssim_src.append(ss)
        rows.append(f"{sample.id},{se:.6g},{pe:.6g},{ss:.6g},{ps:.6g}")
    csv_path = out / "pair_metrics.csv"
    csv_path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    mean_enh = float(np.mean(ssim_enh))
    mean_src = float(np.mean(ssim_src))
    _write_result(out, {
        "command": "eval-pair",
        "head": description,
        "mean_ssim_enhanced": mean_enh,
        "mean_ssim_source": mean_src,
        "samples": len(manifest),
        "csv": str(csv_path),
    })
    print(f"eval-pair: mean SSIM vs target {mean_enh:.4f} (raw source {mean_src:.4f}) "
          f"over {len(manifest)} pairs")
    return 0


def cmd_bench(args) -> int:
    out = _out_dir(args, "bench")
    sizes = [_parse_size(tok) for tok in args.sizes.split(",") if tok.strip()]
    backend_a, backend_b = oracle_backends()
    pipelines = [
        ("oracle-degraded", lambda h, w: backend_a.generate("bench", 0, (h, w))),
        ("oracle-clean", lambda h, w: backend_b.generate("bench", 0, (h, w))),
    ]
    if args.checkpoint:
        head, description = load_enhancement_head(args.checkpoint)
        inputs = {size: backend_a.generate("bench", 0, size) for size in sizes}

        def head_only(h, w):
            return head(inputs[(h, w)])

        def generate_plus_head(h, w):
            return head(backend_a.generate("bench", 0, (h, w)))

        pipelines.append(("head", head_only))
        pipelines.append(("oracle-degraded+head", generate_plus_head))
        print(f"bench: including enhancement head {description}")
    table = benchmark_inference(pipelines, sizes, reps=args.reps, warmup=args.warmup)
    csv_path = write_timing_csv(table, out / "timing.csv")
    if args.plots:
        from .evaluation.report import plot_timing

        plot_timing(table, out / "timing.png")
    _write_result(out, {
        "command": "bench",
        "csv": str(csv_path),
        "rows": [
            {"pipeline": r.pipeline, "size": r.size_label,
             "mean_seconds": r.mean_seconds, "std_seconds": r.std_seconds}
            for r in table.rows
        ],
    })
    print(f"bench: {len(table.rows)} rows -> {csv_path}")
    return 0


def cmd_report(args) -> int:
    out = _out_dir(args, "report")
    written = []
    if args.reference:
        written.append(str(write_metrics_report(
            quality_reference_report(), out / "metrics_report.csv"
        )))
        timing = timing_reference_table()
        written.append(str(write_timing_csv(timing, out / "timing.csv")))
        if args.plots:
            from .evaluation.report import plot_timing

            written.append(str(plot_timing(timing, out / "timing.png")))
    if args.metrics_json:
        rows = json.loads(Path(args.metrics_json).read_text(encoding="utf-8"))
        report = MetricReport([QualityRow(**row) for row in rows])
        written.append(str(write_metrics_report(report, out / "metrics_report.csv")))
    if args.timing_json:
        data = json.loads(Path(args.timing_json).read_text(encoding="utf-8"))
        table = TimingTable.from_recorded({
            name: {_parse_size(k): v for k, v in sizes.items()}
            for name, sizes in data.items()
        })
        written.append(str(write_timing_csv(table, out / "timing.csv")))
        if args.plots:
            from .evaluation.report import plot_timing

            written.append(str(plot_timing(table, out / "timing.png")))
    if not written:
        raise ToolkitError("nothing to report: pass --reference, --metrics-json or --timing-json")
    _write_result(out, {"command": "report", "files": written})
    print(f"report: wrote {len(written)} file(s) under {out}")
    return 0


# --- parser wiring ---

def _add_dataset_args(p, with_backends: bool):
    if with_backends:
        p.add_argument("--backend-a", default="oracle-degraded",
                       help="source-domain generator backend")
        p.add_argument("--backend-b", default="oracle-clean",
                       help="target-domain refiner backend")
    p.add_argument("--count", type=int, required=True, help="number of pairs")
    p.add_argument("--size", default="64", help="image size, H or HxW")
    p.add_argument("--seed", type=int, default=0, help="run seed")
    p.add_argument("--names", help="name pool file, one full name per line")
    p.add_argument("--template", default=DEFAULT_TEMPLATE,
                   help="prompt template containing [FULL NAME]")
    p.add_argument("--guidance", type=float, default=3.0, help="refine guidance scale")
    p.add_argument("--strength", type=float, default=0.7, help="refine prompt strength")
    p.add_argument("--steps", type=int, default=50, help="refine inference steps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="restorekit",
        description="Desk-scale detail-restoration pipeline: dataset construction, "
                    "enhancement-head training, and quality/latency evaluation.",
    )
    parser.add_argument("--version", action="version", version=f"restorekit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dataset-build", help="build a paired dataset with explicit backends")
    _add_dataset_args(p, with_backends=True)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_dataset_build)

    p = sub.add_parser("dataset-oracle", help="build a paired dataset from the procedural oracle")
    _add_dataset_args(p, with_backends=False)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_dataset_oracle)

    p = sub.add_parser("diversity", help="attribute statistics and optional 2-D projection")
    p.add_argument("--manifest", required=True, help="dataset manifest")
    p.add_argument("--attributes", help="attribute sidecar (default: attributes.jsonl next to manifest)")
    p.add_argument("--domain", choices=["A", "B"], default="A", help="which image domain to read")
    p.add_argument("--compare-manifest", help="second manifest for distribution comparison")
    p.add_argument("--compare-attributes", help="attribute sidecar for the second manifest")
    p.add_argument("--embed", action="store_true", help="also embed images and project with t-SNE")
    p.add_argument("--perplexity", type=float, default=15.0, help="t-SNE perplexity")
    p.add_argument("--iterations", type=int, default=500, help="t-SNE iterations")
    p.add_argument("--seed", type=int, default=0, help="t-SNE seed")
    p.add_argument("--plots", action="store_true", help="emit scatter plot")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_diversity)

    p = sub.add_parser("train-pairwise", help="train the U-Net+CBAM head on a paired manifest")
    p.add_argument("--manifest", required=True, help="paired dataset manifest")
    p.add_argument("--ratios", default="0.9,0.05,0.05", help="train,val,test split ratios")
    p.add_argument("--config", help="YAML config file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="config override")
    p.add_argument("--seed", type=int, help="run seed (overrides config)")
    p.add_argument("--max-epochs", type=int, help="epoch cap (overrides config)")
    p.add_argument("--out", help="run directory")
    p.set_defaults(func=cmd_train_pairwise)

    p = sub.add_parser("train-cyclegan", help="train CycleGAN or ESA-CycleGAN on two domains")
    p.add_argument("--domain-a", required=True, help="directory of domain-A images")
    p.add_argument("--domain-b", required=True, help="directory of domain-B images")
    p.add_argument("--config", help="YAML config file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="config override")
    p.add_argument("--lambda-cycle", type=float, help="cycle-consistency weight")
    p.add_argument("--lr", type=float, help="learning rate")
    p.add_argument("--esa", action="store_true", help="use the ESA generator variant")
    p.add_argument("--seed", type=int, help="run seed (overrides config)")
    p.add_argument("--max-epochs", type=int, help="epoch cap (overrides config)")
    p.add_argument("--out", help="run directory")
    p.set_defaults(func=cmd_train_cyclegan)

    p = sub.add_parser("grid", help="hyperparameter grid over lambda_cycle x learning rate")
    p.add_argument("--domain-a", required=True, help="directory of domain-A images")
    p.add_argument("--domain-b", required=True, help="directory of domain-B images")
    p.add_argument("--lambda", dest="lambda_values", default="2,5,10",
                   help="comma-separated lambda_cycle values")
    p.add_argument("--lr", dest="lr_values", default="1e-4,2e-4,3e-4",
                   help="comma-separated learning rates")
    p.add_argument("--config", help="YAML config file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="config override")
    p.add_argument("--esa", action="store_true", help="use the ESA generator variant")
    p.add_argument("--seed", type=int, help="run seed (overrides config)")
    p.add_argument("--max-epochs", type=int, help="epoch cap per cell")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("eval-fid-diff", help="FID against both reference domains")
    p.add_argument("--images", required=True, help="directory of images to score")
    p.add_argument("--ref-schnell", required=True, help="distilled-domain reference directory")
    p.add_argument("--ref-dev", required=True, help="baseline-domain reference directory")
    p.add_argument("--checkpoint", help="enhance --images through this head first")
    p.add_argument("--variant", default="candidate", help="row label for the report")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_eval_fid_diff)

    p = sub.add_parser("eval-pair", help="SSIM/PSNR of an enhancement head on a paired manifest")
    p.add_argument("--manifest", required=True, help="paired dataset manifest")
    p.add_argument("--checkpoint", required=True, help="checkpoint stem to evaluate")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_eval_pair)

    p = sub.add_parser("bench", help="inference latency benchmark")
    p.add_argument("--sizes", default="64,128", help="comma-separated sizes (H or HxW)")
    p.add_argument("--reps", type=int, default=10, help="timed repetitions per cell")
    p.add_argument("--warmup", type=int, default=2, help="untimed warmup iterations")
    p.add_argument("--checkpoint", help="also benchmark this enhancement head")
    p.add_argument("--plots", action="store_true", help="emit timing plot")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="render quality/timing tables to CSV (and plots)")
    p.add_argument("--reference", action="store_true",
                   help="render the recorded full-scale reference tables")
    p.add_argument("--metrics-json", help="JSON list of quality rows to render")
    p.add_argument("--timing-json", help="JSON {pipeline: {size: seconds}} to render")
    p.add_argument("--plots", action="store_true", help="emit plots")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ToolkitError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
