"""Finite-difference validation of every training objective's gradients.

Central differences at eps=1e-3 are only valid where the L1 terms are
differentiable, so the test constructions keep every absolute-value term
bounded away from its kink:
  - grad_loss: z = x + per-pixel linear ramp (slope >> eps) + small noise;
  - perceptual_loss: redraw (deterministically) until every normalized
    feature difference clears a 5e-4 margin;
  - cycle/total: tiny convolution generators biased so round-trip residuals
    stay uniformly negative.
Comparison metric: l2 norm of (analytic - numeric) over the l2 norm of the
gradient, per parameter tensor.
"""

import numpy as np
import pytest
import torch
import torch.nn.functional as F

from restorekit.losses import (
    LossWeights,
    adversarial_losses,
    combined_loss,
    cycle_loss,
    grad_loss,
    perceptual_loss,
    total_cyclegan_loss,
)
from restorekit.losses.functions import _normalize_channels
from restorekit.losses.perceptual import PyramidPerceptualExtractor

EPS = 1e-3
RTOL = 1e-2
SEEDS = range(20)
SHAPE = (1, 3, 8, 8)


def fd_grad(fn, tensor, eps=EPS):
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


def rel_err(analytic, numeric):
    a, n = analytic.reshape(-1), numeric.reshape(-1)
    return ((a - n).norm() / max(a.norm().item(), n.norm().item(), 1e-12)).item()


def check_all(loss_of, params):
    """Autograd vs FD for every tensor in `params`; returns worst rel err."""
    live = [p.clone().requires_grad_(True) for p in params]
    loss = loss_of(*live)
    loss.backward()
    worst = 0.0
    for k, p in enumerate(live):
        def frozen(v, k=k):
            args = [q.detach() for q in live]
            args[k] = v
            return loss_of(*args)
        analytic = p.grad if p.grad is not None else torch.zeros_like(p)
        worst = max(worst, rel_err(analytic, fd_grad(frozen, p.detach())))
    return worst


def ramp_pair(seed):
    """(x, z) where every forward-difference term is far from the L1 kink."""
    rng = np.random.Generator(np.random.PCG64(seed))
    x = torch.from_numpy(rng.uniform(0, 1, SHAPE))
    rows = torch.arange(SHAPE[2], dtype=torch.float64).reshape(1, 1, -1, 1)
    cols = torch.arange(SHAPE[3], dtype=torch.float64).reshape(1, 1, 1, -1)
    alpha, beta = rng.uniform(0.05, 0.1, 2)
    noise = torch.from_numpy(rng.uniform(0, 0.01, SHAPE))
    z = x + alpha * rows + beta * cols + noise
    return x, z


@pytest.fixture(scope="module")
def extractor():
    return PyramidPerceptualExtractor()


def margin_image_pair(extractor, seed, margin=5e-4):
    """(y, z) whose normalized feature diffs all clear `margin`."""
    for attempt in range(200):
        rng = np.random.Generator(np.random.PCG64(seed * 1000 + attempt))
        y = torch.from_numpy(rng.uniform(0, 1, SHAPE))
        z = torch.from_numpy(rng.uniform(0, 1, SHAPE))
        fy = [_normalize_channels(f) for f in extractor.features(y)]
        fz = [_normalize_channels(f) for f in extractor.features(z)]
        if min((a - b).abs().min().item() for a, b in zip(fy, fz)) >= margin:
            return y, z
    raise RuntimeError(f"no margin pair for seed {seed}")


def small_conv(seed, out_channels=3, scale=0.02, bias=0.25):
    g = torch.Generator().manual_seed(seed)
    w = torch.randn(out_channels, 3, 3, 3, generator=g, dtype=torch.float64) * scale
    b = torch.full((out_channels,), bias, dtype=torch.float64)
    b += torch.randn(out_channels, generator=g, dtype=torch.float64) * 0.02
    return w, b


def conv_closure(w, b):
    return lambda t: F.conv2d(t, w, b, padding=1)


def high_batch(seed):
    # inputs in [0.75, 1] stay above the conv outputs (~0.25 +- 0.3), so the
    # round-trip residuals are strictly negative and FD never crosses a kink
    rng = np.random.Generator(np.random.PCG64(seed))
    return torch.from_numpy(rng.uniform(0.75, 1.0, SHAPE))


def test_grad_loss_gradients():
    for seed in SEEDS:
        x, z = ramp_pair(seed)
        worst = check_all(lambda xv, zv: grad_loss(xv, zv), [x, z])
        assert worst < RTOL, f"seed {seed}: {worst}"


def test_perceptual_loss_gradients(extractor):
    for seed in SEEDS:
        y, z = margin_image_pair(extractor, seed)
        worst = check_all(lambda zv: perceptual_loss(y, zv, extractor), [z])
        assert worst < RTOL, f"seed {seed}: {worst}"


def test_combined_loss_gradients(extractor):
    for seed in SEEDS:
        x, z = ramp_pair(seed)
        y, _ = margin_image_pair(extractor, seed + 500)
        # feature margin must hold for the (y, z) actually used
        fy = [_normalize_channels(f) for f in extractor.features(y)]
        fz = [_normalize_channels(f) for f in extractor.features(z)]
        if min((a - b).abs().min().item() for a, b in zip(fy, fz)) < 5e-4:
            continue
        worst = check_all(
            lambda zv: combined_loss(x, y, zv, extractor), [z]
        )
        assert worst < RTOL, f"seed {seed}: {worst}"


def test_adversarial_loss_gradients():
    for seed in SEEDS:
        g = torch.Generator().manual_seed(seed)
        real = torch.randn(1, 1, 7, 7, generator=g, dtype=torch.float64)
        fake = torch.randn(1, 1, 7, 7, generator=g, dtype=torch.float64)
        for idx in (0, 1):
            worst = check_all(
                lambda rv, fv, idx=idx: adversarial_losses(rv, fv)[idx], [real, fake]
            )
            assert worst < RTOL, f"seed {seed} side {idx}: {worst}"


def test_cycle_loss_gradients():
    for seed in SEEDS:
        wg, bg = small_conv(seed * 2 + 1)
        wf, bf = small_conv(seed * 2 + 2)
        batch_a, batch_b = high_batch(seed), high_batch(seed + 999)

        def loss_of(wg_, bg_, wf_, bf_):
            return cycle_loss(conv_closure(wg_, bg_), conv_closure(wf_, bf_),
                              batch_a, batch_b)

        with torch.no_grad():
            r1 = (conv_closure(wf, bf)(conv_closure(wg, bg)(batch_a)) - batch_a)
            r2 = (conv_closure(wg, bg)(conv_closure(wf, bf)(batch_b)) - batch_b)
            assert min(r1.abs().min(), r2.abs().min()) > 0.05
        worst = check_all(loss_of, [wg, bg, wf, bf])
        assert worst < RTOL, f"seed {seed}: {worst}"


def test_total_cyclegan_loss_gradients():
    weights = LossWeights(lambda_cycle=2.0)
    for seed in SEEDS:
        wg, bg = small_conv(seed * 3 + 1)
        wf, bf = small_conv(seed * 3 + 2)
        g = torch.Generator().manual_seed(seed * 3 + 3)
        wd = torch.randn(1, 3, 3, 3, generator=g, dtype=torch.float64) * 0.2
        bd = torch.randn(1, generator=g, dtype=torch.float64) * 0.1
        batch_a, batch_b = high_batch(seed + 31), high_batch(seed + 77)

        def loss_of(wg_, bg_, wf_, bf_, wd_, bd_):
            gen = conv_closure(wg_, bg_)
            fen = conv_closure(wf_, bf_)
            disc = lambda t: F.conv2d(t, wd_, bd_, padding=1)
            adv_ab = ((disc(gen(batch_a)) - 1.0) ** 2).mean()
            adv_ba = ((disc(fen(batch_b)) - 1.0) ** 2).mean()
            cyc = cycle_loss(gen, fen, batch_a, batch_b)
            return total_cyclegan_loss(adv_ab, adv_ba, cyc, weights)

        worst = check_all(loss_of, [wg, bg, wf, bf, wd, bd])
        assert worst < RTOL, f"seed {seed}: {worst}"
