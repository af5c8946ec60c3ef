from .perceptual import PerceptualExtractor, PyramidPerceptualExtractor, default_extractor
from .functions import (
    LossWeights,
    grad_loss,
    pixel_l1_loss,
    perceptual_loss,
    combined_loss,
    adversarial_losses,
    cycle_loss,
    total_cyclegan_loss,
)

__all__ = [
    "PerceptualExtractor",
    "PyramidPerceptualExtractor",
    "default_extractor",
    "LossWeights",
    "grad_loss",
    "pixel_l1_loss",
    "perceptual_loss",
    "combined_loss",
    "adversarial_losses",
    "cycle_loss",
    "total_cyclegan_loss",
]
