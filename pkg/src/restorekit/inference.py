"""Load a trained enhancement head from a checkpoint for inference."""

import json
from pathlib import Path

import torch

from .errors import VersionMismatchError
from .models import (
    CycleGANConfig,
    UNetCBAMConfig,
    architecture_fingerprint,
    init_cyclegan,
    init_unet,
)
from .training.checkpoint import load_checkpoint


def load_enhancement_head(stem):
    """Rebuild the image->image head stored at a checkpoint stem.

    Pairwise checkpoints yield the U-Net; non-pairwise checkpoints yield the
    A->B generator. Returns (callable, description).
    """
    stem = Path(stem)
    sidecar = json.loads(stem.with_suffix(".json").read_text(encoding="utf-8"))
    kind = sidecar.get("kind")
    cfg = sidecar["config"]
    if kind == "pairwise":
        model_cfg = UNetCBAMConfig(
            depth=int(cfg["model"]["depth"]),
            base_channels=int(cfg["model"]["base_channels"]),
            cbam_reduction=int(cfg["model"]["cbam_reduction"]),
        )
        net = init_unet(model_cfg, 0)
        load_checkpoint(
            stem, modules={"model": net},
            fingerprints={"model": architecture_fingerprint("unet_cbam", model_cfg, net)},
        )
        description = f"unet-cbam(depth={model_cfg.depth}, base={model_cfg.base_channels})"
    elif kind == "cyclegan":
        model_cfg = CycleGANConfig(
            base_channels=int(cfg["model"]["base_channels"]),
            residual_blocks=int(cfg["model"]["residual_blocks"]),
            disc_layers=int(cfg["model"]["disc_layers"]),
            disc_base=int(cfg["model"].get("disc_base", 64)),
            use_esa=bool(cfg["model"]["use_esa"]),
        )
        bundle = init_cyclegan(model_cfg, 0)
        net = bundle.g_ab
        load_checkpoint(
            stem, modules={"g_ab": net},
            fingerprints={
                "g_ab": architecture_fingerprint("cyclegan/g_ab", model_cfg, net)
            },
        )
        variant = "esa-cyclegan" if model_cfg.use_esa else "cyclegan"
        description = f"{variant}-generator(base={model_cfg.base_channels})"
    else:
        raise VersionMismatchError(f"unknown checkpoint kind {kind!r}")

    net.eval()

    def head(image: torch.Tensor) -> torch.Tensor:
        with torch.no_grad():
            return net(image)

    return head, description
