"""Location-relative attention with a mixture of logistics.

Weights are differences of logistic CDFs evaluated at half-integer bin edges,
and every mixture mean sits a softplus-positive increment ahead of the
running alignment position, so the attention center can only move forward.
"""
from __future__ import annotations

import torch
from torch import nn
from torch.nn import functional as F

from ..errors import ValidationError


def mol_attention_weights(means: torch.Tensor, scales: torch.Tensor,
                          mix: torch.Tensor, length: int) -> torch.Tensor:
    """Probability weights over ``length`` positions.

    means/scales/mix: [K]; scales must be positive; mix must sum to 1.
    """
    if length < 1:
        raise ValidationError("encoder length must be >= 1")
    j = torch.arange(length, dtype=means.dtype)
    upper = torch.sigmoid((j[None, :] + 0.5 - means[:, None]) / scales[:, None])
    lower = torch.sigmoid((j[None, :] - 0.5 - means[:, None]) / scales[:, None])
    w = (mix[:, None] * (upper - lower)).sum(dim=0)
    w = w.clamp_min(1e-12)
    return w / w.sum()


class MolAttention(nn.Module):
    def __init__(self, query_dim: int, n_mixtures: int = 5):
        super().__init__()
        if n_mixtures < 1:
            raise ValidationError("need at least one mixture component")
        self.n_mixtures = n_mixtures
        self.mlp = nn.Sequential(
            nn.Linear(query_dim, query_dim),
            nn.Tanh(),
            nn.Linear(query_dim, 3 * n_mixtures),
        )

    def forward(self, query: torch.Tensor, position: torch.Tensor, length: int):
        """One attention step: (weights over positions, advanced position)."""
        raw = self.mlp(query).view(3, self.n_mixtures)
        mix = torch.softmax(raw[0], dim=0)
        delta = F.softplus(raw[1])
        scale = F.softplus(raw[2]) + 1e-3
        means = position + delta
        weights = mol_attention_weights(means, scale, mix, length)
        new_position = position + (mix * delta).sum()
        return weights, new_position
