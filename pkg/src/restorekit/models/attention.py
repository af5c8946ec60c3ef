"""Multiplicative attention gates.

Both blocks end in a sigmoid gate multiplied onto their input, so they can
only attenuate: |output| <= |input| element-wise.
"""

import torch
import torch.nn as nn
import torch.nn.functional as F

from ..errors import BadReductionError, SpatialTooSmallError


class CBAM(nn.Module):
    """Channel-then-spatial attention.

    Channel gate: shared two-layer bottleneck over average- and max-pooled
    channel descriptors, sigmoid over the sum. Spatial gate: 7x7 conv over
    stacked channel-wise average and max maps, sigmoid.
    """

    def __init__(self, channels: int, reduction: int = 4):
        super().__init__()
        if channels % reduction != 0:
            raise BadReductionError(f"reduction {reduction} does not divide {channels} channels")
        self.mlp = nn.Sequential(
            nn.Conv2d(channels, channels // reduction, 1, bias=False),
            nn.ReLU(inplace=True),
            nn.Conv2d(channels // reduction, channels, 1, bias=False),
        )
        self.spatial = nn.Conv2d(2, 1, kernel_size=7, padding=3, bias=False)

    def forward(self, x):
        squeeze = x if x.ndim == 4 else x.unsqueeze(0)
        avg = squeeze.mean(dim=(2, 3), keepdim=True)
        mx = squeeze.amax(dim=(2, 3), keepdim=True)
        channel_gate = torch.sigmoid(self.mlp(avg) + self.mlp(mx))
        h = squeeze * channel_gate
        sp = torch.cat([h.mean(dim=1, keepdim=True), h.amax(dim=1, keepdim=True)], dim=1)
        spatial_gate = torch.sigmoid(self.spatial(sp))
        h = h * spatial_gate
        return h if x.ndim == 4 else h[0]


class ESA(nn.Module):
    """Enhanced spatial attention gate.

    1x1 reduction to C/4 channels, strided pooling to roughly quarter
    resolution, a three-conv analysis stack, bilinear upsampling back to the
    input size, 1x1 expansion and a sigmoid gate multiplied onto the input.
    """

    MIN_SPATIAL = 8

    def __init__(self, channels: int):
        super().__init__()
        f = max(channels // 4, 1)
        self.reduce = nn.Conv2d(channels, f, 1)
        self.analyze = nn.Sequential(
            nn.Conv2d(f, f, 3, padding=1),
            nn.ReLU(inplace=True),
            nn.Conv2d(f, f, 3, padding=1),
            nn.ReLU(inplace=True),
            nn.Conv2d(f, f, 3, padding=1),
        )
        self.expand = nn.Conv2d(f, channels, 1)

    def forward(self, x):
        h = x if x.ndim == 4 else x.unsqueeze(0)
        height, width = h.shape[-2:]
        if height < self.MIN_SPATIAL or width < self.MIN_SPATIAL:
            raise SpatialTooSmallError(
                f"ESA needs spatial dims >= {self.MIN_SPATIAL}, got {height}x{width}"
            )
        r = self.reduce(h)
        d = F.max_pool2d(r, kernel_size=4, stride=4)
        d = self.analyze(d)
        u = F.interpolate(d, size=(height, width), mode="bilinear", align_corners=False)
        gate = torch.sigmoid(self.expand(u))
        out = h * gate
        return out if x.ndim == 4 else out[0]
