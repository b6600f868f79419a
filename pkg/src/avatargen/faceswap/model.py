"""Identity-injection face swapping.

The identity extractor is a small embedding network trained in-repo with a
margin contrastive objective over template identities (no external
face-recognition weights at this scale). Identity information modulates
residual blocks between the encoder and decoder via per-channel scale/shift.
"""
from __future__ import annotations

import torch
from torch import nn
from torch.nn import functional as F

from ..errors import ValidationError


class IdentityExtractor(nn.Module):
    def __init__(self, embed_dim: int = 16, base_channels: int = 16):
        super().__init__()
        c = base_channels
        self.net = nn.Sequential(
            nn.Conv2d(3, c, 4, stride=2, padding=1), nn.ReLU(),
            nn.Conv2d(c, 2 * c, 4, stride=2, padding=1), nn.ReLU(),
            nn.Conv2d(2 * c, 2 * c, 4, stride=2, padding=1), nn.ReLU(),
            nn.AdaptiveAvgPool2d(1),
        )
        self.proj = nn.Linear(2 * c, embed_dim)

    def forward(self, image: torch.Tensor) -> torch.Tensor:
        """[B, 3, H, W] -> L2-normalized identity vectors [B, D]."""
        h = self.net(image).flatten(1)
        v = self.proj(h)
        return v / v.norm(dim=1, keepdim=True).clamp_min(1e-8)


class InjectionBlock(nn.Module):
    """Residual block whose activations are modulated by the identity vector."""

    def __init__(self, channels: int, id_dim: int):
        super().__init__()
        self.conv1 = nn.Conv2d(channels, channels, 3, padding=1)
        self.conv2 = nn.Conv2d(channels, channels, 3, padding=1)
        self.scale = nn.Linear(id_dim, channels)
        self.shift = nn.Linear(id_dim, channels)

    def forward(self, x: torch.Tensor, identity: torch.Tensor) -> torch.Tensor:
        s = (1.0 + self.scale(identity))[:, :, None, None]
        b = self.shift(identity)[:, :, None, None]
        h = F.relu(self.conv1(x) * s + b)
        h = self.conv2(h)
        return F.relu(x + h)


class SwapGenerator(nn.Module):
    def __init__(self, id_dim: int = 16, base_channels: int = 16, n_blocks: int = 2):
        super().__init__()
        c = base_channels
        self.encoder = nn.Sequential(
            nn.Conv2d(3, c, 4, stride=2, padding=1), nn.ReLU(),
            nn.Conv2d(c, 2 * c, 4, stride=2, padding=1), nn.ReLU(),
        )
        self.blocks = nn.ModuleList([InjectionBlock(2 * c, id_dim) for _ in range(n_blocks)])
        self.decoder = nn.Sequential(
            nn.ConvTranspose2d(2 * c, c, 4, stride=2, padding=1), nn.ReLU(),
            nn.ConvTranspose2d(c, 3, 4, stride=2, padding=1),
        )

    def forward(self, target: torch.Tensor, identity: torch.Tensor) -> torch.Tensor:
        h = self.encoder(target)
        for block in self.blocks:
            h = block(h, identity)
        return torch.sigmoid(self.decoder(h))


class LayeredDiscriminator(nn.Module):
    """Patch discriminator exposing its per-layer features."""

    def __init__(self, base_channels: int = 16, n_layers: int = 4):
        super().__init__()
        if n_layers < 2:
            raise ValidationError("discriminator needs at least 2 layers")
        chans = [3] + [min(base_channels * 2 ** i, 8 * base_channels) for i in range(n_layers)]
        self.layers = nn.ModuleList(
            nn.Conv2d(chans[i], chans[i + 1], 4, stride=2, padding=1) for i in range(n_layers)
        )
        self.head = nn.Conv2d(chans[-1], 1, 3, padding=1)

    def features(self, image: torch.Tensor) -> list[torch.Tensor]:
        feats = []
        h = image
        for layer in self.layers:
            h = F.leaky_relu(layer(h), 0.2)
            feats.append(h)
        return feats

    def forward(self, image: torch.Tensor) -> torch.Tensor:
        """Mean patch score per batch element."""
        return self.head(self.features(image)[-1]).mean(dim=(1, 2, 3))


class SwapModel(nn.Module):
    """Bundles extractor, generator and the two discriminator scales."""

    def __init__(self, id_dim: int = 16, base_channels: int = 16, disc_layers: int = 4):
        super().__init__()
        self.id_extractor = IdentityExtractor(id_dim, base_channels)
        self.generator = SwapGenerator(id_dim, base_channels)
        self.disc_full = LayeredDiscriminator(base_channels, disc_layers)
        self.disc_half = LayeredDiscriminator(base_channels, disc_layers)

    @property
    def discriminators(self) -> list[LayeredDiscriminator]:
        return [self.disc_full, self.disc_half]

    def disc_inputs(self, image: torch.Tensor) -> list[torch.Tensor]:
        return [image, F.avg_pool2d(image, 2)]

    def swap(self, source: torch.Tensor, target: torch.Tensor) -> torch.Tensor:
        if source.shape[-2:] != target.shape[-2:]:
            raise ValidationError(
                f"resolution mismatch: source {tuple(source.shape[-2:])} "
                f"vs target {tuple(target.shape[-2:])}"
            )
        identity = self.id_extractor(source)
        return self.generator(target, identity)
