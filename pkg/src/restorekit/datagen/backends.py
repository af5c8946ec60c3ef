"""Generator backend plug-in boundary.

A backend wraps a text-to-image generator (domain A source) or an
image-to-image refiner (domain B target). Real diffusion backends plug in
behind this protocol; the toolkit itself ships only the in-process
procedural oracle.
"""

from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import torch


@dataclass(frozen=True)
class BackendCapabilities:
    supports_text_to_image: bool
    supports_image_to_image: bool


@runtime_checkable
class GeneratorBackend(Protocol):
    capabilities: BackendCapabilities
    concurrent_safe: bool

    def generate(self, prompt: str, seed: int, size: tuple) -> torch.Tensor:
        """Text-to-image; deterministic per (prompt, seed, size)."""
        ...

    def refine(self, image: torch.Tensor, prompt: str, *, guidance: float,
               strength: float, steps: int, seed: int) -> torch.Tensor:
        """Image-to-image; output dimensions must equal input dimensions."""
        ...
