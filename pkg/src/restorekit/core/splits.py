"""Deterministic train/val/test splitting.

Assignment hashes (sample id, seed) to the unit interval and buckets by the
cumulative split ratios, so membership is independent of manifest order.
"""

from ..errors import BadRatiosError
from ..seeding import unit_interval
from .manifest import DatasetManifest

DEFAULT_RATIOS = (0.90, 0.05, 0.05)


def split_dataset(manifest: DatasetManifest, ratios=DEFAULT_RATIOS, seed: int = 0):
    """Partition a manifest into (train, val, test) manifests."""
    if len(ratios) != 3:
        raise BadRatiosError(f"expected 3 ratios, got {len(ratios)}")
    if any(r < 0 for r in ratios):
        raise BadRatiosError(f"negative ratio in {ratios}")
    total = sum(ratios)
    if abs(total - 1.0) > 1e-9:
        raise BadRatiosError(f"ratios sum to {total!r}, expected 1")

    c_train = ratios[0]
    c_val = ratios[0] + ratios[1]
    buckets = ([], [], [])
    for sample in manifest.samples:
        u = unit_interval("split", seed, sample.id)
        if u < c_train:
            buckets[0].append(sample)
        elif u < c_val:
            buckets[1].append(sample)
        else:
            buckets[2].append(sample)
    return tuple(manifest.subset(b) for b in buckets)
