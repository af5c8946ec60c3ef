"""Supervised pairwise trainer for the U-Net head.

Minimizes the combined objective (structural term against the input,
perceptual term against the target) with Adam at a constant learning rate,
early-stopping on validation loss. Fully deterministic per (config, seed):
shuffles are derived from (seed, epoch) and no global RNG is consumed.
"""

import math
import time
from pathlib import Path

import torch

from ..core.config import RunConfig
from ..errors import DivergenceDetectedError
from ..losses import LossWeights, combined_loss, default_extractor
from ..models import UNetCBAMConfig, architecture_fingerprint, init_unet
from .common import EarlyStopper, MetricsLog, RunRecord
from .checkpoint import load_checkpoint, save_checkpoint
from .data import batch_ranges, epoch_permutation, load_paired_arrays

PAIRWISE_DEFAULTS = {
    "model": {"depth": 6, "base_channels": 32, "cbam_reduction": 4},
    "loss": {"grad_weight": 1.0, "perceptual_weight": 1.0, "structural": "grad"},
    "optim": {"lr": 5.0e-5, "beta1": 0.9, "beta2": 0.999},
    "train": {"batch_size": 8, "max_epochs": 200, "patience": 10, "seed": 0},
}


def pairwise_defaults() -> RunConfig:
    return RunConfig(PAIRWISE_DEFAULTS)


def train_pairwise(config: RunConfig, train_manifest, val_manifest, extractor=None,
                   out_dir="runs/pairwise", val_metric_fn=None, resume_from=None):
    """Train the U-Net head on a paired manifest.

    val_metric_fn(epoch, computed) may override the early-stopping metric
    (used by tests to exercise the patience policy).
    Returns (best checkpoint stem, RunRecord).
    """
    cfg = config.merged_over(PAIRWISE_DEFAULTS)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg.to_file(out_dir / "config.yaml")
    ckpt_dir = out_dir / "checkpoints"

    seed = int(cfg.require("train.seed"))
    batch_size = int(cfg.require("train.batch_size"))
    max_epochs = int(cfg.require("train.max_epochs"))
    patience = int(cfg.require("train.patience"))
    weights = LossWeights(
        grad_weight=float(cfg.require("loss.grad_weight")),
        perceptual_weight=float(cfg.require("loss.perceptual_weight")),
    )
    structural = str(cfg.require("loss.structural"))

    model_cfg = UNetCBAMConfig(
        depth=int(cfg.require("model.depth")),
        base_channels=int(cfg.require("model.base_channels")),
        cbam_reduction=int(cfg.require("model.cbam_reduction")),
    )
    net = init_unet(model_cfg, seed)
    fingerprints = {"model": architecture_fingerprint("unet_cbam", model_cfg, net)}
    optimizer = torch.optim.Adam(
        net.parameters(),
        lr=float(cfg.require("optim.lr")),
        betas=(float(cfg.require("optim.beta1")), float(cfg.require("optim.beta2"))),
    )
    extractor = extractor or default_extractor()

    train_x, train_y = load_paired_arrays(train_manifest)
    val_x, val_y = load_paired_arrays(val_manifest)

    def validate() -> float:
        net.eval()
        total, count = 0.0, 0
        with torch.no_grad():
            for lo, hi in batch_ranges(len(val_x), batch_size):
                xb, yb = val_x[lo:hi], val_y[lo:hi]
                zb = net(xb)
                loss = combined_loss(xb, yb, zb, extractor, weights, structural)
                total += float(loss.detach()) * (hi - lo)
                count += hi - lo
        net.train()
        return total / count

    def checkpoint_state(stem, epoch, stopper):
        return save_checkpoint(
            stem,
            kind="pairwise",
            modules={"model": net},
            optimizers={"model": optimizer},
            fingerprints=fingerprints,
            config=cfg.to_dict(),
            epoch=epoch,
            best_val_metric=stopper.best,
            epochs_since_improvement=stopper.epochs_since_improvement,
            seed=seed,
        )

    stopper = EarlyStopper(patience=patience)
    start_epoch = 1
    log = MetricsLog(out_dir / "metrics.csv")
    t_start = time.perf_counter()

    if resume_from is not None:
        sidecar = load_checkpoint(
            Path(resume_from), modules={"model": net},
            optimizers={"model": optimizer}, fingerprints=fingerprints,
        )
        stopper.best = float(sidecar["best_val_metric"])
        stopper.epochs_since_improvement = int(sidecar["epochs_since_improvement"])
        start_epoch = int(sidecar["epoch"]) + 1
    else:
        val0 = validate()
        log.add(0, None, val0, None, time.perf_counter() - t_start)

    epoch = start_epoch - 1
    for epoch in range(start_epoch, max_epochs + 1):
        t_epoch = time.perf_counter()
        perm = epoch_permutation(seed, epoch, len(train_x))
        total, count = 0.0, 0
        for lo, hi in batch_ranges(len(train_x), batch_size):
            idx = torch.from_numpy(perm[lo:hi].copy())
            xb, yb = train_x[idx], train_y[idx]
            optimizer.zero_grad()
            zb = net(xb)
            loss = combined_loss(xb, yb, zb, extractor, weights, structural)
            if not torch.isfinite(loss):
                raise DivergenceDetectedError(
                    f"non-finite training loss at epoch {epoch}; last good checkpoint kept"
                )
            loss.backward()
            optimizer.step()
            total += float(loss.detach()) * (hi - lo)
            count += hi - lo
        train_loss = total / count

        val_loss = validate()
        if not math.isfinite(val_loss):
            raise DivergenceDetectedError(f"non-finite validation loss at epoch {epoch}")
        metric = val_metric_fn(epoch, val_loss) if val_metric_fn else val_loss
        if stopper.update(epoch, metric):
            checkpoint_state(ckpt_dir / "best", epoch, stopper)
        checkpoint_state(ckpt_dir / "last", epoch, stopper)
        log.add(epoch, train_loss, val_loss, None, time.perf_counter() - t_epoch)
        if stopper.should_stop:
            break

    record = RunRecord(
        hyperparams={
            "lr": float(cfg.require("optim.lr")),
            "batch_size": batch_size,
            "depth": model_cfg.depth,
            "base_channels": model_cfg.base_channels,
            "structural": structural,
            "seed": seed,
        },
        best_loss=stopper.best,
        ssim_full_cycle=None,
        checkpoint=str(ckpt_dir / "best"),
        seconds=time.perf_counter() - t_start,
        epochs_run=epoch,
    )
    return ckpt_dir / "best", record
