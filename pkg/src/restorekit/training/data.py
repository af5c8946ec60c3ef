"""In-memory datasets and deterministic batching.

Desk-scale datasets (hundreds of small images) are preloaded into stacked
tensors. Epoch shuffles are pure functions of (seed, epoch, tag), so batch
order never depends on process history and resumed runs replay exactly.
"""

from pathlib import Path

import numpy as np
import torch

from ..core.images import load_image
from ..core.manifest import DatasetManifest
from ..errors import ManifestError
from ..seeding import derive_seed, unit_interval


def load_paired_arrays(manifest: DatasetManifest):
    """Stack a paired manifest into (sources, targets) float32 tensors."""
    if len(manifest) == 0:
        raise ManifestError("empty manifest")
    xs, ys = [], []
    for s in manifest:
        x = load_image(manifest.resolve_source(s))
        y = load_image(manifest.resolve_target(s))
        if x.shape != y.shape:
            raise ManifestError(f"sample {s.id}: shape mismatch {x.shape} vs {y.shape}")
        xs.append(x)
        ys.append(y)
    return torch.stack(xs), torch.stack(ys)


def load_image_dir(path):
    """Stack every PNG under a directory, sorted by filename."""
    path = Path(path)
    files = sorted(p for p in path.iterdir() if p.suffix.lower() == ".png")
    if not files:
        raise ManifestError(f"no PNG files under {path}")
    return torch.stack([load_image(p) for p in files]), [p.name for p in files]


def hash_holdout(names, fraction: float, seed: int):
    """Split indices into (train, holdout) by hash rank; order-independent.

    The `fraction` lowest-hashed names form the holdout (at least one when
    fraction > 0), so membership depends only on (name, seed).
    """
    n = len(names)
    keys = [unit_interval("holdout", seed, name) for name in names]
    order = sorted(range(n), key=lambda i: keys[i])
    k = min(max(1, round(fraction * n)), n - 1) if fraction > 0 else 0
    holdout = sorted(order[:k])
    train = sorted(order[k:])
    return train, holdout


def epoch_permutation(seed: int, epoch: int, n: int, tag: str = "") -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(derive_seed("shuffle", seed, epoch, tag)))
    return rng.permutation(n)


def batch_ranges(n: int, batch_size: int, drop_last: bool = False):
    end = (n // batch_size) * batch_size if drop_last else n
    return [(i, min(i + batch_size, end)) for i in range(0, end, batch_size)]
