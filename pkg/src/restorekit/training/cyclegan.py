"""Non-pairwise trainer: CycleGAN / ESA-CycleGAN over two image directories.

Alternates least-squares discriminator updates (fed from a replay buffer of
past fakes) with generator updates on the full two-generator objective.
Per-epoch validation reports the generator-side objective L and the
full-cycle SSIM between domain-A inputs and their round-trip
reconstruction; early stopping tracks L.
"""

import math
import time
from pathlib import Path

import numpy as np
import torch

from ..core.config import RunConfig
from ..errors import DivergenceDetectedError
from ..evaluation.quality import ssim
from ..losses import LossWeights, adversarial_losses
from ..models import CycleGANConfig, architecture_fingerprint, init_cyclegan
from ..seeding import derive_seed
from .common import EarlyStopper, MetricsLog, RunRecord
from .checkpoint import load_checkpoint, save_checkpoint
from .data import batch_ranges, epoch_permutation, hash_holdout, load_image_dir

CYCLEGAN_DEFAULTS = {
    "model": {"base_channels": 32, "residual_blocks": 4, "disc_layers": 3, "disc_base": 64, "use_esa": False},
    "loss": {"lambda_cycle": 10.0, "identity_weight": 0.0},
    "optim": {"lr": 1.0e-4, "beta1": 0.5, "beta2": 0.999},
    "train": {
        "batch_size": 8,
        "max_epochs": 200,
        "patience": 10,
        "seed": 0,
        "val_fraction": 0.1,
        "buffer_size": 50,
        "augment_flips": True,
    },
}


def cyclegan_defaults() -> RunConfig:
    return RunConfig(CYCLEGAN_DEFAULTS)


class FakeBuffer:
    """Replay buffer of past generator outputs for discriminator updates.

    Replacement decisions come from an rng passed per call, so the buffer
    itself holds no hidden random state.
    """

    def __init__(self, capacity: int, images=None):
        self.capacity = capacity
        self.images = list(images or [])

    def push_and_sample(self, fakes: torch.Tensor, rng) -> torch.Tensor:
        out = []
        for img in fakes:
            img = img.detach().clone()
            if len(self.images) < self.capacity:
                self.images.append(img)
                out.append(img)
            elif rng.random() > 0.5:
                slot = int(rng.integers(self.capacity))
                out.append(self.images[slot])
                self.images[slot] = img
            else:
                out.append(img)
        return torch.stack(out)


def train_cyclegan(config: RunConfig, dir_a, dir_b, out_dir="runs/cyclegan",
                   weights: LossWeights | None = None, val_metric_fn=None,
                   resume_from=None):
    """Train on unpaired domain directories; returns (best stem, RunRecord)."""
    cfg = config.merged_over(CYCLEGAN_DEFAULTS)
    if weights is not None:
        cfg = cfg.with_overrides({"loss.lambda_cycle": weights.lambda_cycle})
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg.to_file(out_dir / "config.yaml")
    ckpt_dir = out_dir / "checkpoints"

    seed = int(cfg.require("train.seed"))
    batch_size = int(cfg.require("train.batch_size"))
    max_epochs = int(cfg.require("train.max_epochs"))
    patience = int(cfg.require("train.patience"))
    val_fraction = float(cfg.require("train.val_fraction"))
    buffer_size = int(cfg.require("train.buffer_size"))
    augment_flips = bool(cfg.require("train.augment_flips"))
    lam = float(cfg.require("loss.lambda_cycle"))
    identity_weight = float(cfg.require("loss.identity_weight"))
    lr = float(cfg.require("optim.lr"))
    betas = (float(cfg.require("optim.beta1")), float(cfg.require("optim.beta2")))

    model_cfg = CycleGANConfig(
        base_channels=int(cfg.require("model.base_channels")),
        residual_blocks=int(cfg.require("model.residual_blocks")),
        disc_layers=int(cfg.require("model.disc_layers")),
        disc_base=int(cfg.require("model.disc_base")),
        use_esa=bool(cfg.require("model.use_esa")),
    )
    bundle = init_cyclegan(model_cfg, seed)
    g_ab, g_ba, d_a, d_b = bundle.g_ab, bundle.g_ba, bundle.d_a, bundle.d_b
    fingerprints = {
        name: architecture_fingerprint(f"cyclegan/{name}", model_cfg, module)
        for name, module in bundle.modules().items()
    }
    opt_g = torch.optim.Adam(
        list(g_ab.parameters()) + list(g_ba.parameters()), lr=lr, betas=betas
    )
    opt_d = torch.optim.Adam(
        list(d_a.parameters()) + list(d_b.parameters()), lr=lr, betas=betas
    )

    all_a, names_a = load_image_dir(dir_a)
    all_b, names_b = load_image_dir(dir_b)
    tr_a_idx, val_a_idx = hash_holdout(names_a, val_fraction, seed)
    tr_b_idx, val_b_idx = hash_holdout(names_b, val_fraction, seed)
    train_a, val_a = all_a[tr_a_idx], all_a[val_a_idx]
    train_b, val_b = all_b[tr_b_idx], all_b[val_b_idx]

    buffer_a = FakeBuffer(buffer_size)
    buffer_b = FakeBuffer(buffer_size)

    def set_train(flag: bool):
        for m in bundle.modules().values():
            m.train(flag)

    def generator_objective(xa, xb):
        fake_b = g_ab(xa)
        fake_a = g_ba(xb)
        adv_ab = ((d_b(fake_b) - 1.0) ** 2).mean()
        adv_ba = ((d_a(fake_a) - 1.0) ** 2).mean()
        cyc = (g_ba(fake_b) - xa).abs().mean() + (g_ab(fake_a) - xb).abs().mean()
        total = adv_ab + adv_ba + lam * cyc
        if identity_weight > 0:
            total = total + identity_weight * (
                (g_ab(xb) - xb).abs().mean() + (g_ba(xa) - xa).abs().mean()
            )
        return total, fake_a, fake_b

    def validate():
        set_train(False)
        total, count = 0.0, 0
        with torch.no_grad():
            n = min(len(val_a), len(val_b))
            for lo, hi in batch_ranges(n, batch_size):
                loss, _, _ = generator_objective(val_a[lo:hi], val_b[lo:hi])
                total += float(loss) * (hi - lo)
                count += hi - lo
            ssims = []
            for lo, hi in batch_ranges(len(val_a), batch_size):
                xa = val_a[lo:hi]
                cycle_out = g_ba(g_ab(xa))
                ssims.extend(ssim(a, o) for a, o in zip(xa, cycle_out))
        set_train(True)
        return total / count, float(np.mean(ssims))

    def checkpoint_state(stem, epoch, stopper, val_ssim, best_ssim):
        return save_checkpoint(
            stem,
            kind="cyclegan",
            modules=bundle.modules(),
            optimizers={"g": opt_g, "d": opt_d},
            fingerprints=fingerprints,
            config=cfg.to_dict(),
            epoch=epoch,
            best_val_metric=stopper.best,
            epochs_since_improvement=stopper.epochs_since_improvement,
            seed=seed,
            buffers={"a": buffer_a.images, "b": buffer_b.images},
            metrics={"val_ssim": val_ssim, "best_val_ssim": best_ssim},
        )

    stopper = EarlyStopper(patience=patience)
    best_ssim = None
    start_epoch = 1
    log = MetricsLog(out_dir / "metrics.csv")
    t_start = time.perf_counter()

    if resume_from is not None:
        sidecar = load_checkpoint(
            Path(resume_from), modules=bundle.modules(),
            optimizers={"g": opt_g, "d": opt_d}, fingerprints=fingerprints,
        )
        stopper.best = float(sidecar["best_val_metric"])
        stopper.epochs_since_improvement = int(sidecar["epochs_since_improvement"])
        start_epoch = int(sidecar["epoch"]) + 1
        buffer_a.images = sidecar["_buffers"].get("a", [])
        buffer_b.images = sidecar["_buffers"].get("b", [])
        best_ssim = sidecar["metrics"].get("best_val_ssim")
    else:
        val0, ssim0 = validate()
        log.add(0, None, val0, ssim0, time.perf_counter() - t_start)

    n_iter_batches = min(len(train_a), len(train_b))
    epoch = start_epoch - 1
    for epoch in range(start_epoch, max_epochs + 1):
        t_epoch = time.perf_counter()
        perm_a = epoch_permutation(seed, epoch, len(train_a), "a")
        perm_b = epoch_permutation(seed, epoch, len(train_b), "b")
        total, count = 0.0, 0
        for it, (lo, hi) in enumerate(batch_ranges(n_iter_batches, batch_size, drop_last=True)):
            xa = train_a[torch.from_numpy(perm_a[lo:hi].copy())]
            xb = train_b[torch.from_numpy(perm_b[lo:hi].copy())]
            if augment_flips:
                # deterministic horizontal flips; keeps tiny datasets from
                # being memorized by the discriminators
                rng_aug = np.random.Generator(
                    np.random.PCG64(derive_seed("augment", seed, epoch, it))
                )
                flip_a = torch.from_numpy(rng_aug.random(hi - lo) < 0.5)
                flip_b = torch.from_numpy(rng_aug.random(hi - lo) < 0.5)
                xa = torch.where(flip_a[:, None, None, None], xa.flip(-1), xa)
                xb = torch.where(flip_b[:, None, None, None], xb.flip(-1), xb)

            opt_g.zero_grad()
            g_total, fake_a, fake_b = generator_objective(xa, xb)
            if not torch.isfinite(g_total):
                raise DivergenceDetectedError(
                    f"non-finite generator loss at epoch {epoch}; last good checkpoint kept"
                )
            g_total.backward()
            opt_g.step()

            opt_d.zero_grad()
            rng_a = np.random.Generator(
                np.random.PCG64(derive_seed("buffer", seed, epoch, it, "a"))
            )
            rng_b = np.random.Generator(
                np.random.PCG64(derive_seed("buffer", seed, epoch, it, "b"))
            )
            pool_a = buffer_a.push_and_sample(fake_a, rng_a)
            pool_b = buffer_b.push_and_sample(fake_b, rng_b)
            d_loss_a, _ = adversarial_losses(d_a(xa), d_a(pool_a))
            d_loss_b, _ = adversarial_losses(d_b(xb), d_b(pool_b))
            d_total = d_loss_a + d_loss_b
            if not torch.isfinite(d_total):
                raise DivergenceDetectedError(
                    f"non-finite discriminator loss at epoch {epoch}; last good checkpoint kept"
                )
            d_total.backward()
            opt_d.step()

            total += float(g_total.detach()) * (hi - lo)
            count += hi - lo
        train_loss = total / max(count, 1)

        val_loss, val_ssim = validate()
        if not math.isfinite(val_loss):
            raise DivergenceDetectedError(f"non-finite validation loss at epoch {epoch}")
        metric = val_metric_fn(epoch, val_loss) if val_metric_fn else val_loss
        if stopper.update(epoch, metric):
            best_ssim = val_ssim
            checkpoint_state(ckpt_dir / "best", epoch, stopper, val_ssim, best_ssim)
        checkpoint_state(ckpt_dir / "last", epoch, stopper, val_ssim, best_ssim)
        log.add(epoch, train_loss, val_loss, val_ssim, time.perf_counter() - t_epoch)
        if stopper.should_stop:
            break

    record = RunRecord(
        hyperparams={
            "lambda_cycle": lam,
            "lr": lr,
            "batch_size": batch_size,
            "base_channels": model_cfg.base_channels,
            "residual_blocks": model_cfg.residual_blocks,
            "use_esa": model_cfg.use_esa,
            "seed": seed,
        },
        best_loss=stopper.best,
        ssim_full_cycle=best_ssim,
        checkpoint=str(ckpt_dir / "best"),
        seconds=time.perf_counter() - t_start,
        epochs_run=epoch,
    )
    return ckpt_dir / "best", record
