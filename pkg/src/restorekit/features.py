"""Frozen random convolutional feature pyramid.

A fixed-seed, never-trained conv stack stands in for pretrained perceptual
backbones at desk scale: random projections preserve enough metric structure
for relative comparisons while keeping the toolkit self-contained. The same
pyramid backs the perceptual loss (multi-scale maps), the FID embedder and
the face embedder (pooled vectors).
"""

import numpy as np
import torch
import torch.nn as nn

from .seeding import torch_seed

DEFAULT_FEATURE_SEED = 90210
EMBED_DIM = 64


class RandomConvPyramid(nn.Module):
    """Three tanh conv stages with stride 2; returns one feature map per stage."""

    def __init__(self, seed: int = DEFAULT_FEATURE_SEED, channels=(16, 32, 64)):
        super().__init__()
        self.seed = seed
        self.channels = tuple(channels)
        convs = []
        in_ch = 3
        for idx, out_ch in enumerate(self.channels):
            conv = nn.Conv2d(in_ch, out_ch, kernel_size=5, stride=2, padding=2)
            g = torch.Generator().manual_seed(torch_seed("pyramid", seed, idx))
            fan_in = in_ch * 25
            with torch.no_grad():
                conv.weight.copy_(torch.randn(conv.weight.shape, generator=g) / fan_in**0.5)
                conv.bias.copy_(torch.randn(conv.bias.shape, generator=g) * 0.2)
            convs.append(conv)
            in_ch = out_ch
        self.convs = nn.ModuleList(convs)
        self.requires_grad_(False)
        self.eval()

    def forward(self, x: torch.Tensor):
        if x.ndim == 3:
            x = x.unsqueeze(0)
        h = x * 2.0 - 1.0
        feats = []
        for conv in self.convs:
            # weights cast to the input dtype so float64 gradient checks work
            h = torch.nn.functional.conv2d(
                h, conv.weight.to(h.dtype), conv.bias.to(h.dtype), stride=2, padding=2
            )
            h = torch.tanh(h)
            feats.append(h)
        return feats


class RandomFeatureEmbedder:
    """Pooled pyramid features as a fixed-dimension image embedding.

    The 64-dim vector concatenates per-channel spatial mean and standard
    deviation of the first two stages (16+16+16+16), capturing both average
    response and local-detail energy; the std components are what separate
    blurred from sharp content after global pooling.
    """

    def __init__(self, seed: int = DEFAULT_FEATURE_SEED):
        self.pyramid = RandomConvPyramid(seed=seed)
        self.dim = EMBED_DIM
        self.descriptor = f"random-pyramid(seed={seed})-meanstd-{EMBED_DIM}"

    def embed(self, image: torch.Tensor) -> np.ndarray:
        with torch.no_grad():
            feats = self.pyramid(image.to(torch.float32))
            parts = []
            for f in feats[:2]:
                parts.append(f.mean(dim=(2, 3)))
                parts.append(f.std(dim=(2, 3), unbiased=False))
            vec = torch.cat(parts, dim=1)[0]
        out = vec.numpy().astype(np.float64)
        if not np.all(np.isfinite(out)):
            raise ValueError("non-finite embedding")
        return out
