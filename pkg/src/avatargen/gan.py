"""Least-squares adversarial losses, shared by the face-swap and dubbing
training loops: real targets 1, fake targets 0, generator target 1."""
from __future__ import annotations

import torch

from .torchutil import to_tensor


def lsgan_discriminator_loss(d_real, d_fake) -> torch.Tensor:
    """0.5 * E[(D(real) - 1)^2] + 0.5 * E[(D(fake) - 0)^2]"""
    d_real = to_tensor(d_real, torch.float64 if not isinstance(d_real, torch.Tensor) else d_real.dtype)
    d_fake = to_tensor(d_fake, d_real.dtype)
    return 0.5 * ((d_real - 1.0) ** 2).mean() + 0.5 * (d_fake ** 2).mean()


def lsgan_generator_loss(d_fake) -> torch.Tensor:
    """E[(D(fake) - 1)^2]"""
    d_fake = to_tensor(d_fake, torch.float64 if not isinstance(d_fake, torch.Tensor) else d_fake.dtype)
    return ((d_fake - 1.0) ** 2).mean()
