"""Deterministic model construction.

Weights are drawn from a zero-mean normal scaled by 1/sqrt(fan_in) (gain
sqrt(2) for the hidden convs feeding rectifiers, 1 for heads and attention
gates), using an explicit torch.Generator so the same (config, seed) always
yields bit-identical parameters regardless of global RNG state.
"""

import hashlib
import json
from dataclasses import asdict

import torch
import torch.nn as nn

from ..seeding import torch_seed
from .cyclegan import CycleGANBundle, CycleGANConfig, PatchDiscriminator, ResnetGenerator
from .unet import UNetCBAM, UNetCBAMConfig


def _fan_in(weight: torch.Tensor) -> int:
    dims = weight.shape[1:]
    n = 1
    for d in dims:
        n *= d
    return max(n, 1)


def _is_gate_or_head(name: str) -> bool:
    lowered = name.lower()
    return any(tag in lowered for tag in ("head", "mlp", "spatial", "reduce", "expand", "analyze"))


def deterministic_init_(module: nn.Module, seed: int) -> nn.Module:
    g = torch.Generator().manual_seed(seed)
    for name, m in module.named_modules():
        if isinstance(m, nn.Conv2d):
            gain = 1.0 if _is_gate_or_head(name) else 2.0**0.5
            std = gain / _fan_in(m.weight) ** 0.5
            with torch.no_grad():
                m.weight.copy_(torch.randn(m.weight.shape, generator=g) * std)
                if m.bias is not None:
                    m.bias.zero_()
    return module


def parameter_count(module: nn.Module) -> int:
    return sum(p.numel() for p in module.parameters())


def architecture_fingerprint(kind: str, config, module: nn.Module) -> str:
    spec = {
        "kind": kind,
        "config": asdict(config),
        "params": [(n, list(p.shape)) for n, p in module.named_parameters()],
    }
    canonical = json.dumps(spec, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def init_unet(config: UNetCBAMConfig, seed: int) -> UNetCBAM:
    net = UNetCBAM(config)
    return deterministic_init_(net, torch_seed("unet-init", seed))


def init_cyclegan(config: CycleGANConfig, seed: int) -> CycleGANBundle:
    bundle = CycleGANBundle(
        g_ab=ResnetGenerator(config),
        g_ba=ResnetGenerator(config),
        d_a=PatchDiscriminator(config),
        d_b=PatchDiscriminator(config),
        config=config,
    )
    for name, module in bundle.modules().items():
        deterministic_init_(module, torch_seed("cyclegan-init", seed, name))
    for gen in bundle.generators():
        # zero body head -> the generator starts as the identity map
        with torch.no_grad():
            gen.out_conv.weight.zero_()
            if gen.out_conv.bias is not None:
                gen.out_conv.bias.zero_()
    return bundle
