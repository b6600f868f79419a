"""Adaptive affine feature transformation: every feature channel gets its own
similarity transform (scale, rotation, translation) applied by differentiable
bilinear resampling.

Coordinates are normalized to [-1, 1] with corner alignment; each output
location (x, y) samples the input at

    x' = s*cos(r)*x - s*sin(r)*y + tx
    y' = s*sin(r)*x + s*cos(r)*y + ty

and out-of-range samples clamp to the edge.
"""
from __future__ import annotations

from dataclasses import dataclass

import torch
from torch.nn import functional as F

from ..errors import ValidationError


@dataclass
class AdaATParams:
    """Per-channel transform coefficients, each of shape [B, C] (or [C])."""

    scale: torch.Tensor
    rotation: torch.Tensor
    tx: torch.Tensor
    ty: torch.Tensor

    def __post_init__(self):
        tensors = [self.scale, self.rotation, self.tx, self.ty]
        if any(t.shape != tensors[0].shape for t in tensors):
            raise ValidationError("scale/rotation/tx/ty must share one shape")
        if tensors[0].ndim == 1:
            self.scale, self.rotation, self.tx, self.ty = (t[None] for t in tensors)
        elif tensors[0].ndim != 2:
            raise ValidationError("params must be [C] or [B, C] tensors")
        if not bool((self.scale.detach() > 0).all()):
            raise ValidationError("scales must be strictly positive")

    @property
    def channels(self) -> int:
        return self.scale.shape[1]

    @staticmethod
    def identity(batch: int, channels: int, dtype=torch.float32) -> "AdaATParams":
        one = torch.ones(batch, channels, dtype=dtype)
        zero = torch.zeros(batch, channels, dtype=dtype)
        return AdaATParams(one, zero, zero.clone(), zero.clone())

    @staticmethod
    def from_raw(raw: torch.Tensor) -> "AdaATParams":
        """[B, 4*C] head output -> params; scale positivity via exp."""
        if raw.ndim != 2 or raw.shape[1] % 4:
            raise ValidationError(f"raw params must be [B, 4*C], got {tuple(raw.shape)}")
        c = raw.shape[1] // 4
        return AdaATParams(
            scale=torch.exp(raw[:, :c]),
            rotation=raw[:, c: 2 * c],
            tx=raw[:, 2 * c: 3 * c],
            ty=raw[:, 3 * c:],
        )


def adaat_transform(features: torch.Tensor, params: AdaATParams) -> torch.Tensor:
    """Apply the per-channel similarity transforms; output shape == input."""
    if features.ndim != 4:
        raise ValidationError(f"features must be [B, C, H, W], got {tuple(features.shape)}")
    b, c, h, w = features.shape
    if params.channels != c or params.scale.shape[0] != b:
        raise ValidationError(
            f"params cover [{params.scale.shape[0]}, {params.channels}] channels, "
            f"features are [{b}, {c}]"
        )
    dtype = features.dtype
    xs = torch.linspace(-1.0, 1.0, w, dtype=dtype)
    ys = torch.linspace(-1.0, 1.0, h, dtype=dtype)
    yy, xx = torch.meshgrid(ys, xs, indexing="ij")

    s = params.scale.to(dtype).reshape(b * c, 1, 1)
    r = params.rotation.to(dtype).reshape(b * c, 1, 1)
    tx = params.tx.to(dtype).reshape(b * c, 1, 1)
    ty = params.ty.to(dtype).reshape(b * c, 1, 1)
    cos, sin = torch.cos(r), torch.sin(r)
    gx = s * cos * xx - s * sin * yy + tx
    gy = s * sin * xx + s * cos * yy + ty
    grid = torch.stack([gx, gy], dim=-1)                       # [B*C, H, W, 2]

    out = F.grid_sample(
        features.reshape(b * c, 1, h, w), grid,
        mode="bilinear", padding_mode="border", align_corners=True,
    )
    return out.reshape(b, c, h, w)


def translation_params(batch: int, channels: int, shift_x_px: float, shift_y_px: float,
                       width: int, height: int, dtype=torch.float32) -> AdaATParams:
    """Pure pixel translation expressed in normalized units."""
    p = AdaATParams.identity(batch, channels, dtype)
    p.tx = torch.full_like(p.tx, 2.0 * shift_x_px / (width - 1))
    p.ty = torch.full_like(p.ty, 2.0 * shift_y_px / (height - 1))
    return p
