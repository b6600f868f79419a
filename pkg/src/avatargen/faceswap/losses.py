"""Face-swap loss suite: identity cosine loss, mean-normalized L1
reconstruction, weak feature matching over discriminator layers m..M, the
shared least-squares adversarial terms, and their weighted total.
"""
from __future__ import annotations

from dataclasses import dataclass

import torch

from ..errors import ValidationError
from ..gan import lsgan_discriminator_loss, lsgan_generator_loss
from ..torchutil import to_tensor


@dataclass(frozen=True)
class SwapLossWeights:
    identity: float = 5.0
    reconstruction: float = 10.0
    feature_match: float = 10.0
    feature_match_start: int = 2  # first discriminator layer entering the sum

    def __post_init__(self):
        if min(self.identity, self.reconstruction, self.feature_match) < 0:
            raise ValidationError("loss weights must be non-negative")
        if self.feature_match_start < 1:
            raise ValidationError("feature_match_start must be >= 1")


def identity_loss(v_result, v_source) -> torch.Tensor:
    """1 - cosine similarity; 0 for aligned vectors, 2 for opposite ones."""
    v_r = to_tensor(v_result, torch.float64 if not isinstance(v_result, torch.Tensor) else v_result.dtype)
    v_s = to_tensor(v_source, v_r.dtype)
    nr, ns = v_r.norm(), v_s.norm()
    if nr.item() == 0.0 or ns.item() == 0.0:
        raise ValidationError("identity vectors must have positive norm")
    return 1.0 - (v_r @ v_s) / (nr * ns)


def reconstruction_loss(result, target) -> torch.Tensor:
    """Mean absolute difference (L1 normalized by element count)."""
    r = to_tensor(result, torch.float64 if not isinstance(result, torch.Tensor) else result.dtype)
    t = to_tensor(target, r.dtype)
    if r.shape != t.shape:
        raise ValidationError(f"shape mismatch: {tuple(r.shape)} vs {tuple(t.shape)}")
    return (r - t).abs().mean()


def weak_feature_matching_loss(disc, result, target, start_layer: int) -> torch.Tensor:
    """Sum over layers i = start..M of mean |D_i(result) - D_i(target)|.

    The discriminator acts as a fixed feature extractor here: its parameters
    receive no gradient, while gradients still flow into ``result``.
    """
    if not isinstance(target, torch.Tensor):
        target = to_tensor(target)
    with torch.no_grad():
        feats_t = disc.features(target)
    n_layers = len(feats_t)
    if not (1 <= start_layer <= n_layers):
        raise ValidationError(
            f"start layer {start_layer} outside discriminator's 1..{n_layers}"
        )
    flags = [p.requires_grad for p in disc.parameters()]
    for p in disc.parameters():
        p.requires_grad_(False)
    try:
        feats_r = disc.features(result)
    finally:
        for p, flag in zip(disc.parameters(), flags):
            p.requires_grad_(flag)
    total = feats_r[0].new_zeros(())
    for i in range(start_layer - 1, n_layers):
        total = total + (feats_r[i] - feats_t[i]).abs().mean()
    return total


def adversarial_losses(d_real, d_fake) -> tuple[torch.Tensor, torch.Tensor]:
    """(discriminator loss, generator loss) in the least-squares form."""
    return lsgan_discriminator_loss(d_real, d_fake), lsgan_generator_loss(d_fake)


def swap_total_loss(l_identity, l_reconstruction, l_adversarial, l_feature_match_sum,
                    weights: SwapLossWeights) -> torch.Tensor:
    """identity*w + reconstruction*w + adversarial + feature_match_sum*w."""
    parts = [to_tensor(v, torch.float64) if not isinstance(v, torch.Tensor) else v
             for v in (l_identity, l_reconstruction, l_adversarial, l_feature_match_sum)]
    return (
        weights.identity * parts[0]
        + weights.reconstruction * parts[1]
        + parts[2]
        + weights.feature_match * parts[3]
    )
