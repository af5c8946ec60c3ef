"""Perceptual feature extractor slot.

The default extractor is the frozen fixed-seed random pyramid; a pretrained
LPIPS-style backbone can be dropped in behind the same protocol when
available.
"""

from typing import Protocol, runtime_checkable

import torch

from ..features import DEFAULT_FEATURE_SEED, RandomConvPyramid


@runtime_checkable
class PerceptualExtractor(Protocol):
    descriptor: str

    def features(self, image: torch.Tensor) -> list:
        """Multi-scale feature maps; deterministic, fixed shapes per input shape."""
        ...


class PyramidPerceptualExtractor:
    def __init__(self, seed: int = DEFAULT_FEATURE_SEED):
        self.pyramid = RandomConvPyramid(seed=seed)
        self.descriptor = f"random-pyramid(seed={seed})"

    def features(self, image: torch.Tensor) -> list:
        batched = image.ndim == 4
        feats = self.pyramid(image)
        if not batched:
            feats = [f[0] for f in feats]
        return feats


_default = None


def default_extractor() -> PyramidPerceptualExtractor:
    global _default
    if _default is None:
        _default = PyramidPerceptualExtractor()
    return _default
