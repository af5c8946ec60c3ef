from .attention import CBAM, ESA
from .unet import UNetCBAMConfig, UNetCBAM
from .cyclegan import CycleGANConfig, ResnetGenerator, PatchDiscriminator, CycleGANBundle
from .factory import (
    init_unet,
    init_cyclegan,
    architecture_fingerprint,
    parameter_count,
)

__all__ = [
    "CBAM",
    "ESA",
    "UNetCBAMConfig",
    "UNetCBAM",
    "CycleGANConfig",
    "ResnetGenerator",
    "PatchDiscriminator",
    "CycleGANBundle",
    "init_unet",
    "init_cyclegan",
    "architecture_fingerprint",
    "parameter_count",
]
