"""Lip-sync error metrics computed against this repo's own sync scorer.

lse_d: mean L2 distance between the audio embedding and the visual embedding
at matched offsets (lower is better). lse_c: mean margin of the matched-offset
similarity over the median similarity across candidate offsets (higher is
better). Both are comparable only between runs of this repo's scorer, never
against externally published numbers.
"""
from __future__ import annotations

import numpy as np
import torch

from ..dubbing.sync import SyncScorer
from ..errors import ValidationError
from ..syndata import audio_window

MAX_OFFSET = 4  # candidate temporal offsets, in video frames


@torch.no_grad()
def lse_metrics(frames: np.ndarray, audio: np.ndarray, scorer: SyncScorer,
                max_offset: int = MAX_OFFSET) -> tuple[float, float]:
    frames = np.asarray(frames)
    audio = np.asarray(audio)
    t_frames = frames.shape[0]
    if t_frames < 2 * max_offset + 1:
        raise ValidationError(
            f"clip of {t_frames} frames shorter than the +-{max_offset} offset window"
        )
    if audio.shape[0] % t_frames:
        raise ValidationError("audio frame count must be a multiple of the video frame count")
    r = audio.shape[0] // t_frames
    win = scorer.audio_window_size

    e_v = scorer.embed_frames(frames)
    matched = np.stack([audio_window(audio, t, r, win) for t in range(t_frames)])
    e_a = scorer.embed_audio(matched)
    lse_d = float((e_a - e_v).norm(dim=1).mean())

    offsets = list(range(-max_offset, max_offset + 1))
    sims = []
    for off in offsets:
        shifted = np.stack([
            audio_window(audio, min(max(t + off, 0), t_frames - 1), r, win)
            for t in range(t_frames)
        ])
        e_o = scorer.embed_audio(shifted)
        sims.append(((e_o * e_v).sum(dim=1) + 1.0) / 2.0)
    sims = torch.stack(sims)                       # [offsets, T]
    matched_sim = sims[offsets.index(0)]
    lse_c = float((matched_sim - sims.median(dim=0).values).mean())
    return lse_d, lse_c
