"""Dubbing loss suite: multi-scale perception loss over a frozen feature
pyramid, least-squares GAN terms, squared lip-sync penalty, and the weighted
total."""
from __future__ import annotations

import torch
from torch import nn
from torch.nn import functional as F

from ..errors import ValidationError
from ..gan import lsgan_discriminator_loss, lsgan_generator_loss
from ..torchutil import to_tensor


class FrozenPyramid(nn.Module):
    """Fixed random conv pyramid standing in for a pretrained feature net.

    Layer 1 is the identity map (raw pixels); deeper layers are seeded,
    frozen stride-2 convolutions, so the loss keeps a direct pixel term plus
    coarser structure terms.
    """

    def __init__(self, n_layers: int = 3, seed: int = 1234, base_channels: int = 8):
        super().__init__()
        if n_layers < 1:
            raise ValidationError("pyramid needs at least 1 layer")
        gen = torch.Generator().manual_seed(seed)
        convs = []
        in_c = 3
        for i in range(n_layers - 1):
            out_c = base_channels * (2**i)
            conv = nn.Conv2d(in_c, out_c, 3, stride=2, padding=1)
            with torch.no_grad():
                conv.weight.copy_(torch.randn(conv.weight.shape, generator=gen) * 0.2)
                conv.bias.zero_()
            in_c = out_c
            convs.append(conv)
        self.convs = nn.ModuleList(convs)
        for p in self.parameters():
            p.requires_grad_(False)

    def forward(self, image: torch.Tensor) -> list[torch.Tensor]:
        feats = [image]
        h = image
        for conv in self.convs:
            h = torch.relu(conv(h))
            feats.append(h)
        return feats

    @property
    def n_layers(self) -> int:
        return len(self.convs) + 1


def perception_loss(output, real, feature_net: FrozenPyramid) -> torch.Tensor:
    """Mean per-layer L1 over features of the images and their 2x-downsampled
    copies, averaged over the two branches and the layer count."""
    out = output if isinstance(output, torch.Tensor) else to_tensor(output)
    ref = real if isinstance(real, torch.Tensor) else to_tensor(real, out.dtype)
    if out.shape != ref.shape:
        raise ValidationError(f"shape mismatch: {tuple(out.shape)} vs {tuple(ref.shape)}")
    if out.ndim == 3:
        out, ref = out[None], ref[None]
    out_small = F.avg_pool2d(out, 2)
    ref_small = F.avg_pool2d(ref, 2)
    feats = [feature_net(x) for x in (out, ref, out_small, ref_small)]
    n = feature_net.n_layers
    total = out.new_zeros(())
    for i in range(n):
        full = (feats[0][i] - feats[1][i]).abs().mean()
        small = (feats[2][i] - feats[3][i]).abs().mean()
        total = total + (full + small) / (2 * n)
    return total


def gan_losses(d_real, d_fake) -> tuple[torch.Tensor, torch.Tensor]:
    """(discriminator loss, generator loss), least-squares form."""
    return lsgan_discriminator_loss(d_real, d_fake), lsgan_generator_loss(d_fake)


def lip_sync_penalty(scores) -> torch.Tensor:
    """E[(score - 1)^2] over precomputed scorer outputs."""
    s = scores if isinstance(scores, torch.Tensor) else to_tensor(scores, torch.float64)
    return ((s - 1.0) ** 2).mean()


def lip_sync_loss(scorer, audio_windows, frames, strict: bool = False) -> torch.Tensor:
    """E[(scorer(A, I) - 1)^2]; zero iff the scorer outputs 1 everywhere.

    An untrained scorer triggers a warning, or a validation error in strict
    mode (its scores carry no sync meaning)."""
    if not scorer.is_trained:
        import warnings

        message = "sync scorer has not been trained; lip-sync loss is meaningless"
        if strict:
            raise ValidationError(message)
        warnings.warn(message, stacklevel=2)
    return lip_sync_penalty(scorer.scores(audio_windows, frames))


def dubbing_total_loss(l_perception, l_sync, l_gan_generator,
                       perception_weight: float, sync_weight: float) -> torch.Tensor:
    if perception_weight < 0 or sync_weight < 0:
        raise ValidationError("loss weights must be non-negative")
    parts = [v if isinstance(v, torch.Tensor) else to_tensor(v, torch.float64)
             for v in (l_perception, l_sync, l_gan_generator)]
    return perception_weight * parts[0] + sync_weight * parts[1] + parts[2]
