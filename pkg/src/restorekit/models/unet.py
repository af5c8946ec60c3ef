"""Residual U-Net with CBAM attention at every level.

Each encoder level halves the spatial dims; the decoder mirrors them with
skip concatenation. Every level applies a residual block of two
conv+norm+activation units followed by CBAM before the residual add
(conv -> norm -> activation -> CBAM -> add). The head squashes to [0, 1]
with a sigmoid.
"""

from dataclasses import dataclass

import torch
import torch.nn as nn
import torch.nn.functional as F

from ..errors import BadReductionError, ShapeNotDivisibleError
from .attention import CBAM

# channel growth is capped so the deep levels stay desk-sized
CHANNEL_CAP_MULTIPLIER = 8


@dataclass(frozen=True)
class UNetCBAMConfig:
    depth: int = 6
    base_channels: int = 32
    cbam_reduction: int = 4
    in_channels: int = 3
    out_channels: int = 3

    def __post_init__(self):
        if self.depth < 2:
            raise ValueError(f"depth must be >= 2, got {self.depth}")
        if self.base_channels < 4:
            raise ValueError(f"base_channels must be >= 4, got {self.base_channels}")
        for ch in self.level_channels():
            if ch % self.cbam_reduction != 0:
                raise BadReductionError(
                    f"cbam_reduction {self.cbam_reduction} does not divide level width {ch}"
                )

    def level_channels(self):
        return [self.base_channels * min(2**lvl, CHANNEL_CAP_MULTIPLIER)
                for lvl in range(self.depth)]

    @property
    def divisor(self) -> int:
        return 2 ** (self.depth - 1)


class ResidualCBAMBlock(nn.Module):
    def __init__(self, channels: int, reduction: int):
        super().__init__()
        self.body = nn.Sequential(
            nn.Conv2d(channels, channels, 3, padding=1),
            nn.InstanceNorm2d(channels),
            nn.ReLU(inplace=True),
            nn.Conv2d(channels, channels, 3, padding=1),
            nn.InstanceNorm2d(channels),
            nn.ReLU(inplace=True),
            CBAM(channels, reduction),
        )

    def forward(self, x):
        return x + self.body(x)


class UNetCBAM(nn.Module):
    def __init__(self, config: UNetCBAMConfig = UNetCBAMConfig()):
        super().__init__()
        self.config = config
        chs = config.level_channels()
        red = config.cbam_reduction

        self.stem = nn.Conv2d(config.in_channels, chs[0], 3, padding=1)
        self.enc_blocks = nn.ModuleList(ResidualCBAMBlock(c, red) for c in chs)
        self.downs = nn.ModuleList(
            nn.Sequential(
                nn.Conv2d(chs[i], chs[i + 1], 3, stride=2, padding=1),
                nn.InstanceNorm2d(chs[i + 1]),
                nn.ReLU(inplace=True),
            )
            for i in range(config.depth - 1)
        )
        rev = chs[::-1]
        self.ups = nn.ModuleList(
            nn.Conv2d(rev[i], rev[i + 1], 3, padding=1) for i in range(config.depth - 1)
        )
        self.fuse = nn.ModuleList(
            nn.Sequential(
                nn.Conv2d(rev[i + 1] * 2, rev[i + 1], 3, padding=1),
                nn.InstanceNorm2d(rev[i + 1]),
                nn.ReLU(inplace=True),
            )
            for i in range(config.depth - 1)
        )
        self.dec_blocks = nn.ModuleList(
            ResidualCBAMBlock(rev[i + 1], red) for i in range(config.depth - 1)
        )
        self.head = nn.Conv2d(chs[0], config.out_channels, 3, padding=1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        batched = x.ndim == 4
        h = x if batched else x.unsqueeze(0)
        height, width = h.shape[-2:]
        div = self.config.divisor
        if height % div or width % div:
            raise ShapeNotDivisibleError(
                f"spatial dims must be divisible by {div} for depth {self.config.depth}, "
                f"got {height}x{width}"
            )
        h = self.stem(h)
        skips = []
        for lvl in range(self.config.depth):
            h = self.enc_blocks[lvl](h)
            if lvl < self.config.depth - 1:
                skips.append(h)
                h = self.downs[lvl](h)
        for i in range(self.config.depth - 1):
            h = F.interpolate(h, scale_factor=2, mode="nearest")
            h = self.ups[i](h)
            h = torch.cat([h, skips[-1 - i]], dim=1)
            h = self.fuse[i](h)
            h = self.dec_blocks[i](h)
        out = torch.sigmoid(self.head(h))
        return out if batched else out[0]
