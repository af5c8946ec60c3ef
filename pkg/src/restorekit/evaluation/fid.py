"""Fréchet distance between Gaussians fitted to image embeddings.

FID(a, b) = ||mu_a - mu_b||^2 + tr(S_a + S_b - 2 (S_a S_b)^{1/2}).

The matrix square root is computed by symmetric eigendecomposition of
S_a^{1/2} S_b S_a^{1/2}, which is similar to S_a S_b but symmetric, so the
whole computation stays in well-conditioned symmetric linear algebra.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import (
    DimensionMismatchError,
    NumericallyIndefiniteError,
    TooFewSamplesError,
)

EIG_TOLERANCE = 1e-8


@dataclass
class GaussianStats:
    mean: np.ndarray
    cov: np.ndarray
    n: int

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=np.float64)
        self.cov = np.asarray(self.cov, dtype=np.float64)
        d = self.mean.shape[0]
        if self.cov.shape != (d, d):
            raise DimensionMismatchError(
                f"mean dim {d} vs cov shape {self.cov.shape}"
            )
        if self.n < 2:
            raise TooFewSamplesError(f"need n >= 2, got {self.n}")
        if np.abs(self.cov - self.cov.T).max() > 1e-9:
            raise ValueError("covariance not symmetric")

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


def fit_gaussian(features) -> GaussianStats:
    """Sample mean and unbiased (n-1) covariance of a feature matrix."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"expected (n, d) features, got shape {x.shape}")
    n = x.shape[0]
    if n < 2:
        raise TooFewSamplesError(f"need at least 2 samples, got {n}")
    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / (n - 1)
    cov = (cov + cov.T) / 2.0
    return GaussianStats(mean=mean, cov=cov, n=n)


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(mat)
    if vals.min() < -EIG_TOLERANCE:
        raise NumericallyIndefiniteError(f"eigenvalue {vals.min():.3e} below -{EIG_TOLERANCE}")
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.T


def fid(stats_a: GaussianStats, stats_b: GaussianStats) -> float:
    if stats_a.dim != stats_b.dim:
        raise DimensionMismatchError(f"{stats_a.dim} vs {stats_b.dim}")
    diff = stats_a.mean - stats_b.mean
    sqrt_a = _psd_sqrt(stats_a.cov)
    inner = sqrt_a @ stats_b.cov @ sqrt_a
    inner = (inner + inner.T) / 2.0
    vals = np.linalg.eigh(inner)[0]
    if vals.min() < -EIG_TOLERANCE:
        raise NumericallyIndefiniteError(f"eigenvalue {vals.min():.3e} below -{EIG_TOLERANCE}")
    tr_sqrt = np.sqrt(np.clip(vals, 0.0, None)).sum()
    value = float(diff @ diff + np.trace(stats_a.cov) + np.trace(stats_b.cov) - 2.0 * tr_sqrt)
    return max(value, 0.0)


def embed_set(images, embedder) -> np.ndarray:
    vecs = [embedder.embed(img) for img in images]
    if not vecs:
        raise TooFewSamplesError("empty image set")
    return np.stack(vecs)


def fid_diff(images, ref_schnell, ref_dev, embedder):
    """FID of `images` against both reference sets.

    Returns (fid_schnell, fid_dev, fid_schnell - fid_dev). A positive third
    component means the set sits closer to the baseline-quality reference
    than to the distilled-quality reference.
    """
    dim = getattr(embedder, "dim", None)
    minimum = max((dim or 0) + 1, 16)
    sets = {"images": list(images), "ref_schnell": list(ref_schnell), "ref_dev": list(ref_dev)}
    for name, group in sets.items():
        if len(group) < minimum:
            raise TooFewSamplesError(f"{name}: need >= {minimum} images, got {len(group)}")
    stats = {name: fit_gaussian(embed_set(group, embedder)) for name, group in sets.items()}
    fid_s = fid(stats["images"], stats["ref_schnell"])
    fid_d = fid(stats["images"], stats["ref_dev"])
    return fid_s, fid_d, fid_s - fid_d
