"""Audio-driven dubbing network.

Encoders produce audio, source and reference feature maps; an alignment
encoder fuses source/reference; a fully connected head emits per-channel
affine coefficients that deform the reference features; a decoder with skip
connections from the source encoder inpaints the output frame.
"""
from __future__ import annotations

import torch
from torch import nn
from torch.nn import functional as F

from ..errors import ValidationError
from ..syndata import FEATURE_DIM
from ..torchutil import to_tensor
from .adaat import AdaATParams, adaat_transform


class DubbingModel(nn.Module):
    def __init__(self, base_channels: int = 24, audio_dim: int = 32, audio_window: int = 9):
        super().__init__()
        c = base_channels
        self.audio_window_size = audio_window
        self.feature_channels = 2 * c

        self.audio_encoder = nn.Sequential(
            nn.Flatten(),
            nn.Linear(audio_window * FEATURE_DIM, 2 * audio_dim), nn.ReLU(),
            nn.Linear(2 * audio_dim, audio_dim), nn.ReLU(),
        )
        self.source_enc1 = nn.Sequential(nn.Conv2d(3, c, 4, stride=2, padding=1), nn.ReLU())
        self.source_enc2 = nn.Sequential(nn.Conv2d(c, 2 * c, 4, stride=2, padding=1), nn.ReLU())
        self.reference_encoder = nn.Sequential(
            nn.Conv2d(3, c, 4, stride=2, padding=1), nn.ReLU(),
            nn.Conv2d(c, 2 * c, 4, stride=2, padding=1), nn.ReLU(),
        )
        self.alignment_encoder = nn.Sequential(
            nn.Conv2d(4 * c, 2 * c, 3, padding=1), nn.ReLU(),
            nn.Conv2d(2 * c, 2 * c, 3, padding=1), nn.ReLU(),
            nn.AdaptiveAvgPool2d(1), nn.Flatten(),
        )
        # emits 4 coefficients per reference feature channel; zero-initialized
        # so training starts at the identity transform
        self.adaat_head = nn.Sequential(
            nn.Linear(audio_dim + 2 * c, 4 * c), nn.ReLU(),
            nn.Linear(4 * c, 4 * (2 * c)),
        )
        nn.init.zeros_(self.adaat_head[-1].weight)
        nn.init.zeros_(self.adaat_head[-1].bias)

        self.dec1 = nn.Sequential(
            nn.ConvTranspose2d(4 * c, c, 4, stride=2, padding=1), nn.ReLU()
        )
        self.dec2 = nn.Sequential(
            nn.ConvTranspose2d(2 * c, c, 4, stride=2, padding=1), nn.ReLU(),
            nn.Conv2d(c, 3, 3, padding=1),
        )

    def predict_params(self, audio_feat: torch.Tensor, align_feat: torch.Tensor) -> AdaATParams:
        raw = self.adaat_head(torch.cat([audio_feat, align_feat], dim=1))
        return AdaATParams.from_raw(raw)

    def forward(self, source: torch.Tensor, reference: torch.Tensor,
                audio_windows: torch.Tensor) -> torch.Tensor:
        if source.shape != reference.shape:
            raise ValidationError(
                f"source {tuple(source.shape)} and reference {tuple(reference.shape)} differ"
            )
        if audio_windows.shape[1] != self.audio_window_size:
            raise ValidationError(
                f"audio window length {audio_windows.shape[1]} != configured "
                f"{self.audio_window_size}"
            )
        f_audio = self.audio_encoder(audio_windows)
        s1 = self.source_enc1(source)
        f_s = self.source_enc2(s1)
        f_r = self.reference_encoder(reference)
        f_align = self.alignment_encoder(torch.cat([f_s, f_r], dim=1))
        params = self.predict_params(f_audio, f_align)
        f_d = adaat_transform(f_r, params)
        h = self.dec1(torch.cat([f_d, f_s], dim=1))
        out = self.dec2(torch.cat([h, s1], dim=1))
        return torch.sigmoid(out)


def dub_frame(model: DubbingModel, source, reference, audio_window) -> torch.Tensor:
    """Single-frame dubbing, deterministic in eval mode; [1,3,H,W] output."""
    was_training = model.training
    model.eval()
    try:
        with torch.no_grad():
            src = to_tensor(source)
            ref = to_tensor(reference)
            win = to_tensor(audio_window)
            if src.ndim == 3:
                src = src[None]
            if ref.ndim == 3:
                ref = ref[None]
            if win.ndim == 2:
                win = win[None]
            return model(src, ref, win)
    finally:
        model.train(was_training)
