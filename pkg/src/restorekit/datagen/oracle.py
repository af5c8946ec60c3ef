"""Procedural stand-in for the distilled/baseline generator pair.

Each seed yields a portrait-like composition: a smooth background gradient,
a soft-edged face ellipse, a hair ring, high-frequency texture bands (the
skin/hair detail surrogate) and two bright specular dots (eye reflections).
The clean half keeps full texture; the degraded half attenuates the texture,
blurs, and adds mild noise — the same qualitative gap the real distilled
generator shows, so enhancement heads have a recoverable signal.

All texture wavelengths and blur radii are pixel-anchored, which keeps the
mean-absolute-gradient gap between the two halves at every image size.
"""

import numpy as np
from scipy.ndimage import gaussian_filter

from ..core.images import as_image
from ..errors import SizeTooSmallError
from ..seeding import derive_seed
from .backends import BackendCapabilities

MIN_SIZE = 32


def procedural_oracle_pair(seed: int, size: tuple):
    """Return (degraded, clean) image tensors for one synthetic portrait."""
    H, W = int(size[0]), int(size[1])
    if H < MIN_SIZE or W < MIN_SIZE:
        raise SizeTooSmallError(f"minimum size is {MIN_SIZE}x{MIN_SIZE}, got {H}x{W}")
    rng = np.random.Generator(np.random.PCG64(seed))

    ys = np.linspace(0.0, 1.0, H)
    xs = np.linspace(0.0, 1.0, W)
    Y, X = np.meshgrid(ys, xs, indexing="ij")

    # background: linear gradient in a random direction per channel
    theta = rng.uniform(0.0, 2.0 * np.pi)
    base = rng.uniform(0.30, 0.60, size=3)
    slope = rng.uniform(-0.2, 0.2, size=3)
    ramp = np.cos(theta) * X + np.sin(theta) * Y - 0.5
    img = base[:, None, None] + slope[:, None, None] * ramp[None]

    # face ellipse with a soft edge
    cx = rng.uniform(0.44, 0.56)
    cy = rng.uniform(0.40, 0.50)
    rx = rng.uniform(0.20, 0.28)
    ry = rng.uniform(0.28, 0.38)
    d = ((X - cx) / rx) ** 2 + ((Y - cy) / ry) ** 2
    face = 1.0 / (1.0 + np.exp(-(1.0 - d) * 10.0))
    skin = np.array([rng.uniform(0.50, 0.70), rng.uniform(0.38, 0.55), rng.uniform(0.30, 0.48)])
    img = img * (1.0 - face[None]) + skin[:, None, None] * face[None]

    # hair: dark ring over the upper half of the ellipse boundary
    hair = np.exp(-(((d - 1.15) / 0.16) ** 2)) / (1.0 + np.exp(-(cy - Y) * 14.0))
    hair_color = rng.uniform(0.10, 0.35, size=3)
    img = img * (1.0 - hair[None]) + hair_color[:, None, None] * hair[None]

    # high-frequency texture bands, wavelengths fixed in pixels,
    # normalized to unit RMS so the detail amplitude is predictable
    tex = np.zeros((H, W))
    for _ in range(4):
        wavelength_px = rng.uniform(3.0, 6.0)
        phi = rng.uniform(0.0, np.pi)
        psi = rng.uniform(0.0, 2.0 * np.pi)
        weight = rng.uniform(0.5, 1.0)
        coord = (np.cos(phi) * X * W + np.sin(phi) * Y * H) / wavelength_px
        tex += weight * np.sin(2.0 * np.pi * coord + psi)
    tex /= max(np.sqrt(np.mean(tex**2)), 1e-9)
    amp = rng.uniform(0.12, 0.16)
    detail = amp * tex * np.clip(face + hair, 0.0, 1.0)

    # specular dots at eye positions, ~1 px sigma
    eye_y = cy - 0.08 * ry / 0.33
    dots = np.zeros((H, W))
    for ex in (cx - 0.38 * rx, cx + 0.38 * rx):
        dots += np.exp(-(((X - ex) * W) ** 2 + ((Y - eye_y) * H) ** 2) / (2.0 * 1.0**2))
    dots *= 0.35

    clean = np.clip(img + detail[None] + dots[None], 0.0, 1.0)

    # the degradation is kept moderate: wide enough for the metrics to
    # separate the domains, narrow enough that a desk-scale head can cross it
    attenuation = rng.uniform(0.35, 0.50)
    degraded = img + attenuation * detail[None] + 0.55 * dots[None]
    blur_sigma = rng.uniform(0.8, 1.1)
    degraded = gaussian_filter(degraded, sigma=(0.0, blur_sigma, blur_sigma), mode="reflect")
    noise_sd = rng.uniform(0.003, 0.006)
    degraded = degraded + rng.normal(0.0, noise_sd, size=degraded.shape)
    degraded = np.clip(degraded, 0.0, 1.0)

    return as_image(degraded.astype(np.float32)), as_image(clean.astype(np.float32))


class OracleBackend:
    """Backend facade over the procedural pair.

    The ``degraded`` role plays the distilled text-to-image generator; the
    ``clean`` role plays the baseline image-to-image refiner. Both halves of
    a pair come from the seed derived from (prompt, seed), so a generate on
    one backend and a refine on the other compose into an aligned pair.
    """

    capabilities = BackendCapabilities(supports_text_to_image=True, supports_image_to_image=True)
    concurrent_safe = True

    def __init__(self, role: str):
        if role not in ("degraded", "clean"):
            raise ValueError(f"unknown oracle role: {role!r}")
        self.role = role

    def _pair(self, prompt: str, seed: int, size: tuple):
        pair_seed = derive_seed("oracle-pair", prompt, seed)
        degraded, clean = procedural_oracle_pair(pair_seed, size)
        return degraded if self.role == "degraded" else clean

    def generate(self, prompt, seed, size):
        return self._pair(prompt, seed, size)

    def refine(self, image, prompt, *, guidance=3.0, strength=0.7, steps=50, seed=0):
        # guidance/strength/steps shape real diffusion backends only; the
        # oracle's output is fully determined by (prompt, seed, input size).
        size = (image.shape[1], image.shape[2])
        return self._pair(prompt, seed, size)


def oracle_backends():
    """(backend_a, backend_b): degraded-domain generator, clean-domain refiner."""
    return OracleBackend("degraded"), OracleBackend("clean")
