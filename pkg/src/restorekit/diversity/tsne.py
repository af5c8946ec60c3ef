"""Exact (O(N^2)) t-SNE projection to 2-D.

Standard recipe: perplexity-calibrated Gaussian affinities, early
exaggeration (factor 12 for the first quarter of the iterations), gradient
descent with momentum and adaptive gains. The final 50 iterations switch to
plain gradient descent with backtracking step halving, which makes the KL
objective provably non-increasing over that window.

Points are processed in a canonical order keyed by a content hash and
mapped back at the end, with per-point content-derived initial positions,
so the output is exactly invariant to input order.
"""

import hashlib
import math

import numpy as np

from ..errors import PerplexityInfeasibleError, TooFewPointsError, TooManyPointsError
from ..seeding import derive_seed

MIN_POINTS = 16
MAX_POINTS = 2000
MIN_PERPLEXITY = 5.0
EXAGGERATION = 12.0
MONOTONE_TAIL = 50
P_FLOOR = 1e-12


def _conditional_probs(d2_row: np.ndarray, target_entropy: float):
    lo, hi = 1e-20, 1e20
    beta = 1.0
    for _ in range(64):
        p = np.exp(-d2_row * beta)
        total = p.sum()
        if total <= 0:
            entropy = 0.0
            p_norm = np.zeros_like(p)
        else:
            p_norm = p / total
            nz = p_norm > 0
            entropy = -np.sum(p_norm[nz] * np.log(p_norm[nz]))
        if abs(entropy - target_entropy) < 1e-7:
            break
        if entropy > target_entropy:
            lo = beta
            beta = beta * 2 if hi >= 1e20 else (beta + hi) / 2
        else:
            hi = beta
            beta = beta / 2 if lo <= 1e-20 else (beta + lo) / 2
    return p_norm


def _joint_affinities(x: np.ndarray, perplexity: float) -> np.ndarray:
    n = x.shape[0]
    sq = (x * x).sum(axis=1)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (x @ x.T), 0.0)
    target = math.log(perplexity)
    cond = np.zeros((n, n))
    for i in range(n):
        row = np.delete(d2[i], i)
        p = _conditional_probs(row, target)
        cond[i, np.arange(n) != i] = p
    joint = (cond + cond.T) / (2.0 * n)
    return np.maximum(joint, P_FLOOR)


def _q_terms(y: np.ndarray):
    sq = (y * y).sum(axis=1)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (y @ y.T), 0.0)
    w = 1.0 / (1.0 + d2)
    np.fill_diagonal(w, 0.0)
    z = w.sum()
    return w, np.maximum(w / z, P_FLOOR)


def _kl(p: np.ndarray, y: np.ndarray) -> float:
    _, q = _q_terms(y)
    mask = ~np.eye(p.shape[0], dtype=bool)
    return float(np.sum(p[mask] * np.log(p[mask] / q[mask])))


def _grad(p: np.ndarray, y: np.ndarray) -> np.ndarray:
    w, q = _q_terms(y)
    coeff = (p - q) * w
    return 4.0 * ((np.diag(coeff.sum(axis=1)) - coeff) @ y)


def project_embeddings(vectors, perplexity: float = 15.0, iterations: int = 500,
                       seed: int = 0, learning_rate: float = 100.0,
                       return_kl_history: bool = False):
    """Project N D-dim vectors to N 2-D points; deterministic per seed."""
    x = np.asarray(vectors, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"expected (N, D) vectors, got shape {x.shape}")
    n = x.shape[0]
    if n < MIN_POINTS:
        raise TooFewPointsError(f"need >= {MIN_POINTS} points, got {n}")
    if n > MAX_POINTS:
        raise TooManyPointsError(f"exact t-SNE capped at {MAX_POINTS} points, got {n}")
    if not MIN_PERPLEXITY <= perplexity < (n - 1) / 3:
        raise PerplexityInfeasibleError(
            f"need {MIN_PERPLEXITY} <= perplexity < (N-1)/3 = {(n - 1) / 3:.2f}, got {perplexity}"
        )
    exaggerated_end = math.ceil(0.25 * iterations)
    if iterations < exaggerated_end + MONOTONE_TAIL + 10:
        raise ValueError(f"iterations too small for the schedule, got {iterations}")

    # canonical content order -> exact input-order invariance
    keys = [hashlib.blake2b(row.tobytes(), digest_size=16).digest() for row in x]
    order = sorted(range(n), key=lambda i: keys[i])
    xc = x[order]

    p = _joint_affinities(xc, perplexity)
    y = np.empty((n, 2))
    for i in range(n):
        rng = np.random.Generator(np.random.PCG64(derive_seed("tsne-init", seed, keys[order[i]])))
        y[i] = rng.normal(0.0, 1e-4, size=2)

    velocity = np.zeros_like(y)
    gains = np.ones_like(y)
    kl_history = []
    tail_start = iterations - MONOTONE_TAIL
    for t in range(iterations):
        if t < tail_start:
            p_eff = p * EXAGGERATION if t < exaggerated_end else p
            grad = _grad(p_eff, y)
            momentum = 0.5 if t < exaggerated_end else 0.8
            flip = np.sign(grad) != np.sign(velocity)
            gains = np.where(flip, gains + 0.2, gains * 0.8)
            gains = np.maximum(gains, 0.01)
            velocity = momentum * velocity - learning_rate * gains * grad
            y = y + velocity
            y = y - y.mean(axis=0)
        else:
            # monotone tail: plain GD with backtracking halving
            current = _kl(p, y)
            grad = _grad(p, y)
            step = learning_rate
            accepted = False
            for _ in range(40):
                candidate = y - step * grad
                value = _kl(p, candidate)
                if value <= current:
                    y = candidate
                    kl_history.append(value)
                    accepted = True
                    break
                step /= 2.0
            if not accepted:
                kl_history.append(current)

    out = np.empty_like(y)
    for canonical_idx, original_idx in enumerate(order):
        out[original_idx] = y[canonical_idx]
    if return_kl_history:
        return out, kl_history
    return out
