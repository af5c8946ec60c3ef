import numpy as np
import pytest
import torch

from restorekit.core import split_dataset
from restorekit.datagen import build_paired_dataset, builtin_name_pool, oracle_backends


@pytest.fixture(scope="session")
def tiny_dataset(tmp_path_factory):
    """24 oracle pairs at 64x64, shared across tests that just need data."""
    out = tmp_path_factory.mktemp("tiny-data")
    backend_a, backend_b = oracle_backends()
    manifest = build_paired_dataset(
        backend_a, backend_b, builtin_name_pool(),
        count=24, size=(64, 64), seed=2024, out_dir=out,
    )
    return manifest


@pytest.fixture(scope="session")
def tiny_splits(tiny_dataset):
    train_m, val_m, _ = split_dataset(tiny_dataset, (0.8, 0.2, 0.0), seed=5)
    return train_m, val_m


def finite_difference_gradient(fn, tensor: torch.Tensor, eps: float = 1e-3) -> torch.Tensor:
    """Central finite differences of a scalar function wrt one tensor."""
    flat = tensor.detach().clone().reshape(-1)
    grad = torch.zeros_like(flat)
    for i in range(flat.numel()):
        orig = flat[i].item()
        flat[i] = orig + eps
        hi = float(fn(flat.reshape(tensor.shape)))
        flat[i] = orig - eps
        lo = float(fn(flat.reshape(tensor.shape)))
        flat[i] = orig
        grad[i] = (hi - lo) / (2 * eps)
    return grad.reshape(tensor.shape)


def relative_gradient_error(analytic: torch.Tensor, numeric: torch.Tensor) -> float:
    a = analytic.double().reshape(-1)
    n = numeric.double().reshape(-1)
    denom = max(a.norm().item(), n.norm().item(), 1e-12)
    return (a - n).norm().item() / denom


def smooth_field(rng: np.random.Generator, shape, amplitude: float) -> torch.Tensor:
    """Random low-frequency field, used to keep L1 kinks away from FD probes."""
    c, h, w = shape
    ys = np.linspace(0, 1, h)[None, :, None]
    xs = np.linspace(0, 1, w)[None, None, :]
    field = np.zeros(shape)
    for _ in range(3):
        fy, fx = rng.uniform(0.5, 2.0, size=2)
        phase = rng.uniform(0, 2 * np.pi, size=(c, 1, 1))
        field += np.sin(2 * np.pi * (fy * ys + fx * xs) + phase)
    field *= amplitude / 3.0
    return torch.from_numpy(field)
