"""Training objectives.

Pairwise head:   combined = w_g * GRAD(x, z) + w_p * LPIPS-style(y, z),
where x is the input image, y the target and z the model output. The
gradient term anchors structure to the input; the perceptual term pulls
appearance toward the target.

Adversarial training uses the least-squares GAN form, and the full
two-generator objective is
    total = adv(G->B) + adv(F->A) + lambda_cycle * cycle(G, F).
"""

from dataclasses import dataclass

import torch

from ..errors import NonFiniteScoresError, ShapeMismatchError


@dataclass(frozen=True)
class LossWeights:
    lambda_cycle: float = 10.0
    grad_weight: float = 1.0
    perceptual_weight: float = 1.0

    def __post_init__(self):
        for name in ("lambda_cycle", "grad_weight", "perceptual_weight"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


def _check_same_shape(*tensors):
    first = tensors[0]
    for t in tensors[1:]:
        if t.shape != first.shape:
            raise ShapeMismatchError(f"{tuple(first.shape)} vs {tuple(t.shape)}")


def grad_loss(x: torch.Tensor, z: torch.Tensor) -> torch.Tensor:
    """Mean |forward-difference gradient of x minus that of z|.

    Differences run along height and width; the mean is over every
    difference term of both directions, so constant offsets cancel exactly.
    """
    _check_same_shape(x, z)
    dh_x = x[..., :, 1:] - x[..., :, :-1]
    dh_z = z[..., :, 1:] - z[..., :, :-1]
    dv_x = x[..., 1:, :] - x[..., :-1, :]
    dv_z = z[..., 1:, :] - z[..., :-1, :]
    total = (dh_x - dh_z).abs().sum() + (dv_x - dv_z).abs().sum()
    count = dh_x.numel() + dv_x.numel()
    return total / count


def pixel_l1_loss(x: torch.Tensor, z: torch.Tensor) -> torch.Tensor:
    """Plain mean absolute error; alternative structural term to grad_loss."""
    _check_same_shape(x, z)
    return (x - z).abs().mean()


def _normalize_channels(f: torch.Tensor) -> torch.Tensor:
    # unit-normalize the channel vector at every spatial location
    dim = 0 if f.ndim == 3 else 1
    norm = torch.sqrt((f * f).sum(dim=dim, keepdim=True) + 1e-10)
    return f / norm


def perceptual_loss(y: torch.Tensor, z: torch.Tensor, extractor=None) -> torch.Tensor:
    """Mean absolute difference between channel-normalized feature maps."""
    _check_same_shape(y, z)
    if extractor is None:
        from .perceptual import default_extractor
        extractor = default_extractor()
    feats_y = extractor.features(y)
    feats_z = extractor.features(z)
    per_scale = []
    for fy, fz in zip(feats_y, feats_z):
        per_scale.append((_normalize_channels(fy) - _normalize_channels(fz)).abs().mean())
    return torch.stack(per_scale).mean()


def combined_loss(x, y, z, extractor=None, weights: LossWeights = LossWeights(),
                  structural: str = "grad") -> torch.Tensor:
    _check_same_shape(x, y, z)
    if structural == "grad":
        structural_term = grad_loss(x, z)
    elif structural == "l1":
        structural_term = pixel_l1_loss(x, z)
    else:
        raise ValueError(f"unknown structural term {structural!r}")
    return (weights.grad_weight * structural_term
            + weights.perceptual_weight * perceptual_loss(y, z, extractor))


def adversarial_losses(disc_scores_real: torch.Tensor, disc_scores_fake: torch.Tensor):
    """Least-squares GAN: (d_loss, g_loss) from patch score maps."""
    if not torch.isfinite(disc_scores_real).all() or not torch.isfinite(disc_scores_fake).all():
        raise NonFiniteScoresError("discriminator scores contain non-finite values")
    d_loss = 0.5 * ((disc_scores_real - 1.0) ** 2).mean() + 0.5 * (disc_scores_fake**2).mean()
    g_loss = ((disc_scores_fake - 1.0) ** 2).mean()
    return d_loss, g_loss


def cycle_loss(g, f, batch_a: torch.Tensor, batch_b: torch.Tensor) -> torch.Tensor:
    """L1 round-trip error: |f(g(a)) - a| + |g(f(b)) - b|, each batch-meaned."""
    recon_a = f(g(batch_a))
    recon_b = g(f(batch_b))
    _check_same_shape(recon_a, batch_a)
    _check_same_shape(recon_b, batch_b)
    return (recon_a - batch_a).abs().mean() + (recon_b - batch_b).abs().mean()


def total_cyclegan_loss(g_adv_ab, g_adv_ba, cycle, weights: LossWeights):
    """Generator-side objective: both adversarial terms plus weighted cycle."""
    for name, term in (("g_adv_ab", g_adv_ab), ("g_adv_ba", g_adv_ba), ("cycle", cycle)):
        value = term.detach() if isinstance(term, torch.Tensor) else torch.tensor(float(term))
        if not torch.isfinite(value).all():
            raise NonFiniteScoresError(f"{name} is non-finite")
    return g_adv_ab + g_adv_ba + weights.lambda_cycle * cycle
