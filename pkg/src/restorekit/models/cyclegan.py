"""CycleGAN generators and patch discriminator.

Generator: 7x7 stem, two stride-2 downsamples, residual blocks (each
followed by an ESA gate in the ESA variant), two upsamples, and a sigmoid
head applied to the logit of the input plus the body output. With the body
head zero-initialized the generator starts as the identity map, so
desk-scale runs keep full-cycle fidelity from epoch one and learn a detail
residual instead of re-synthesizing images from scratch.

Discriminator: PatchGAN — stacked stride-2 4x4 convs and a stride-1 head
producing a patch score map (64x64 input, 3 layers -> 7x7 map).
"""

from dataclasses import dataclass

import torch
import torch.nn as nn
import torch.nn.functional as F

from ..errors import ShapeNotDivisibleError, SpatialTooSmallError
from .attention import ESA


@dataclass(frozen=True)
class CycleGANConfig:
    base_channels: int = 32
    residual_blocks: int = 4
    disc_layers: int = 3
    disc_base: int = 64
    use_esa: bool = False
    in_channels: int = 3

    def __post_init__(self):
        if self.base_channels < 4:
            raise ValueError(f"base_channels must be >= 4, got {self.base_channels}")
        if self.residual_blocks < 1:
            raise ValueError(f"residual_blocks must be >= 1, got {self.residual_blocks}")
        if self.disc_layers < 1:
            raise ValueError(f"disc_layers must be >= 1, got {self.disc_layers}")
        if self.disc_base < 4:
            raise ValueError(f"disc_base must be >= 4, got {self.disc_base}")


class ResidualBlock(nn.Module):
    def __init__(self, channels: int):
        super().__init__()
        self.body = nn.Sequential(
            nn.Conv2d(channels, channels, 3, padding=1, padding_mode="reflect"),
            nn.InstanceNorm2d(channels),
            nn.ReLU(inplace=True),
            nn.Conv2d(channels, channels, 3, padding=1, padding_mode="reflect"),
            nn.InstanceNorm2d(channels),
        )

    def forward(self, x):
        return x + self.body(x)


class ResnetGenerator(nn.Module):
    LOGIT_EPS = 0.02

    def __init__(self, config: CycleGANConfig = CycleGANConfig()):
        super().__init__()
        self.config = config
        base = config.base_channels
        layers = [
            nn.Conv2d(config.in_channels, base, 7, padding=3, padding_mode="reflect"),
            nn.InstanceNorm2d(base),
            nn.ReLU(inplace=True),
        ]
        ch = base
        for _ in range(2):
            layers += [
                nn.Conv2d(ch, ch * 2, 3, stride=2, padding=1),
                nn.InstanceNorm2d(ch * 2),
                nn.ReLU(inplace=True),
            ]
            ch *= 2
        for _ in range(config.residual_blocks):
            layers.append(ResidualBlock(ch))
            if config.use_esa:
                layers.append(ESA(ch))
        for _ in range(2):
            layers += [
                nn.Upsample(scale_factor=2, mode="nearest"),
                nn.Conv2d(ch, ch // 2, 3, padding=1),
                nn.InstanceNorm2d(ch // 2),
                nn.ReLU(inplace=True),
            ]
            ch //= 2
        self.out_conv = nn.Conv2d(ch, config.in_channels, 7, padding=3, padding_mode="reflect")
        layers.append(self.out_conv)
        self.body = nn.Sequential(*layers)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        batched = x.ndim == 4
        h = x if batched else x.unsqueeze(0)
        height, width = h.shape[-2:]
        if height % 4 or width % 4:
            raise ShapeNotDivisibleError(
                f"spatial dims must be divisible by 4, got {height}x{width}"
            )
        base = torch.logit(h.clamp(self.LOGIT_EPS, 1.0 - self.LOGIT_EPS))
        out = torch.sigmoid(base + self.body(h))
        return out if batched else out[0]


class PatchDiscriminator(nn.Module):
    MIN_SPATIAL = 16

    def __init__(self, config: CycleGANConfig = CycleGANConfig()):
        super().__init__()
        self.config = config
        base = config.disc_base
        layers = [
            nn.Conv2d(config.in_channels, base, 4, stride=2, padding=1),
            nn.LeakyReLU(0.2, inplace=True),
        ]
        ch = base
        for _ in range(config.disc_layers - 1):
            # unnormalized: the domains differ mostly in local detail
            # energy, which per-image normalization would cancel out
            layers += [
                nn.Conv2d(ch, ch * 2, 4, stride=2, padding=1),
                nn.LeakyReLU(0.2, inplace=True),
            ]
            ch *= 2
        layers.append(nn.Conv2d(ch, 1, 4, stride=1, padding=1))
        self.body = nn.Sequential(*layers)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        batched = x.ndim == 4
        h = x if batched else x.unsqueeze(0)
        height, width = h.shape[-2:]
        if height < self.MIN_SPATIAL or width < self.MIN_SPATIAL:
            raise SpatialTooSmallError(
                f"discriminator needs >= {self.MIN_SPATIAL}px, got {height}x{width}"
            )
        out = self.body(h)
        return out if batched else out[0]


@dataclass
class CycleGANBundle:
    """Two generators (a<->b) and their discriminators, sharing one config."""

    g_ab: ResnetGenerator
    g_ba: ResnetGenerator
    d_a: PatchDiscriminator
    d_b: PatchDiscriminator
    config: CycleGANConfig

    def modules(self) -> dict:
        return {"g_ab": self.g_ab, "g_ba": self.g_ba, "d_a": self.d_a, "d_b": self.d_b}

    def generators(self):
        return [self.g_ab, self.g_ba]

    def discriminators(self):
        return [self.d_a, self.d_b]
