"""Windowed SSIM and PSNR for [0, 1] images.

SSIM uses the standard 11x11 Gaussian window with sigma 1.5, K1=0.01,
K2=0.03 and dynamic range 1.0, with Gaussian-weighted (biased) moments,
averaged over valid windows and channels.
"""

import math

import numpy as np
import torch
from scipy.signal import convolve2d

from ..errors import ShapeMismatchError, TooFewSamplesError, ToolkitError

WINDOW_SIZE = 11
SIGMA = 1.5
K1 = 0.01
K2 = 0.03
DYNAMIC_RANGE = 1.0


class TooSmallError(ToolkitError):
    pass


def _to_chw(img) -> np.ndarray:
    if isinstance(img, torch.Tensor):
        img = img.detach().cpu().numpy()
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3:
        raise ValueError(f"expected (C, H, W) or (H, W), got shape {arr.shape}")
    return arr


def _gaussian_window(size: int, sigma: float) -> np.ndarray:
    half = (size - 1) / 2.0
    coords = np.arange(size) - half
    g = np.exp(-(coords**2) / (2.0 * sigma**2))
    kernel = np.outer(g, g)
    return kernel / kernel.sum()


_WINDOW = _gaussian_window(WINDOW_SIZE, SIGMA)


def ssim(a, b) -> float:
    a = _to_chw(a)
    b = _to_chw(b)
    if a.shape != b.shape:
        raise ShapeMismatchError(f"{a.shape} vs {b.shape}")
    if min(a.shape[1], a.shape[2]) < WINDOW_SIZE:
        raise TooSmallError(f"min spatial dim must be >= {WINDOW_SIZE}, got {a.shape[1:]}")

    c1 = (K1 * DYNAMIC_RANGE) ** 2
    c2 = (K2 * DYNAMIC_RANGE) ** 2
    values = []
    for ch in range(a.shape[0]):
        x, y = a[ch], b[ch]
        mu_x = convolve2d(x, _WINDOW, mode="valid")
        mu_y = convolve2d(y, _WINDOW, mode="valid")
        xx = convolve2d(x * x, _WINDOW, mode="valid") - mu_x**2
        yy = convolve2d(y * y, _WINDOW, mode="valid") - mu_y**2
        xy = convolve2d(x * y, _WINDOW, mode="valid") - mu_x * mu_y
        num = (2.0 * mu_x * mu_y + c1) * (2.0 * xy + c2)
        den = (mu_x**2 + mu_y**2 + c1) * (xx + yy + c2)
        values.append(num / den)
    return float(np.mean(values))


def psnr(a, b) -> float:
    """10*log10(1/MSE) in dB; returns +inf when the images are identical."""
    a = _to_chw(a)
    b = _to_chw(b)
    if a.shape != b.shape:
        raise ShapeMismatchError(f"{a.shape} vs {b.shape}")
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(DYNAMIC_RANGE**2 / mse)


def batch_ssim(inputs, outputs) -> float:
    if len(inputs) != len(outputs):
        raise ShapeMismatchError(f"{len(inputs)} vs {len(outputs)} images")
    if len(inputs) == 0:
        raise TooFewSamplesError("empty batch")
    return float(np.mean([ssim(x, y) for x, y in zip(inputs, outputs)]))
