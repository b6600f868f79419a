"""Audio-visual sync scorer: twin embedding branches trained contrastively on
matched vs time-shifted (audio window, frame) pairs. Scores are cosine
similarities mapped to [0, 1] and are computed per sample, so batch order
cannot affect them."""
from __future__ import annotations

import numpy as np
import torch
from torch import nn

from ..checkpoint import Checkpoint
from ..config import Config, config_hash, config_to_dict
from ..errors import TrainingDivergedError, ValidationError
from ..syndata import FEATURE_DIM, Corpus, audio_window
from ..torchutil import arrays_to_state, seed_everything, single_threaded, state_to_arrays, to_tensor

MODULE_ID = "sync"


class SyncScorer(nn.Module):
    def __init__(self, embed_dim: int = 16, base_channels: int = 16, audio_window: int = 9):
        super().__init__()
        self.audio_window_size = audio_window
        c = base_channels
        self.visual = nn.Sequential(
            nn.Conv2d(3, c, 4, stride=2, padding=1), nn.ReLU(),
            nn.Conv2d(c, 2 * c, 4, stride=2, padding=1), nn.ReLU(),
            nn.Conv2d(2 * c, 2 * c, 4, stride=2, padding=1), nn.ReLU(),
            nn.AdaptiveAvgPool2d(1), nn.Flatten(),
            nn.Linear(2 * c, embed_dim),
        )
        self.audio = nn.Sequential(
            nn.Flatten(),
            nn.Linear(audio_window * FEATURE_DIM, 4 * c), nn.ReLU(),
            nn.Linear(4 * c, embed_dim),
        )
        self.register_buffer("trained_flag", torch.zeros(1))

    @property
    def is_trained(self) -> bool:
        return bool(self.trained_flag.item() > 0)

    def embed_frames(self, frames) -> torch.Tensor:
        x = to_tensor(frames, next(self.parameters()).dtype)
        if x.ndim == 3:
            x = x[None]
        e = self.visual(x)
        return e / e.norm(dim=1, keepdim=True).clamp_min(1e-8)

    def embed_audio(self, windows) -> torch.Tensor:
        x = to_tensor(windows, next(self.parameters()).dtype)
        if x.ndim == 2:
            x = x[None]
        if x.shape[1] != self.audio_window_size:
            raise ValidationError(
                f"audio window length {x.shape[1]} != configured {self.audio_window_size}"
            )
        e = self.audio(x)
        return e / e.norm(dim=1, keepdim=True).clamp_min(1e-8)

    def scores(self, windows, frames) -> torch.Tensor:
        """Per-pair similarity in [0, 1]."""
        e_a = self.embed_audio(windows)
        e_v = self.embed_frames(frames)
        return ((e_a * e_v).sum(dim=1) + 1.0) / 2.0


def build_sync_scorer(cfg: Config) -> SyncScorer:
    s = cfg.sync
    return SyncScorer(embed_dim=s.embed_dim, base_channels=s.base_channels,
                      audio_window=s.audio_window)


def clip_pairs(clip, window: int):
    """All (audio window, frame index) pairs of one clip."""
    r = clip.audio_rate
    return [(audio_window(clip.audio, t, r, window), t) for t in range(clip.frames.shape[0])]


def sync_validation_accuracy(scorer: SyncScorer, clips, rng: np.random.Generator) -> float:
    """Fraction of clips whose matched pairing outscores a mismatched one."""
    wins = 0
    for clip in clips:
        t_frames = clip.frames.shape[0]
        r = clip.audio_rate
        win = scorer.audio_window_size
        frames = to_tensor(clip.frames)
        matched = np.stack([audio_window(clip.audio, t, r, win) for t in range(t_frames)])
        shift = int(rng.integers(2, max(t_frames - 1, 3)))
        mismatched = np.stack([
            audio_window(clip.audio, (t + shift) % t_frames, r, win) for t in range(t_frames)
        ])
        with torch.no_grad():
            s_match = scorer.scores(matched, frames).mean().item()
            s_miss = scorer.scores(mismatched, frames).mean().item()
        wins += int(s_match > s_miss)
    return wins / len(clips)


def train_sync_scorer(corpus: Corpus, cfg: Config) -> tuple[Checkpoint, list[float]]:
    clips = [c for c in corpus.train if c.frames.shape[0] >= 4]
    if not clips:
        raise ValidationError(
            "corpus has no clips long enough to form mismatched (negative) pairs"
        )
    single_threaded()
    tr = cfg.sync.train
    seed_everything(tr.seed)
    rng = np.random.default_rng(tr.seed)
    scorer = build_sync_scorer(cfg)
    opt = torch.optim.Adam(scorer.parameters(), lr=tr.lr)
    win = cfg.sync.audio_window
    bce = nn.BCELoss()

    history = []
    for step in range(tr.steps):
        windows, frames, labels = [], [], []
        for _ in range(tr.batch_size):
            clip = clips[int(rng.integers(len(clips)))]
            t_frames = clip.frames.shape[0]
            t = int(rng.integers(t_frames))
            positive = rng.uniform() < 0.5
            if positive:
                ta = t
            else:
                # time-shifted negative, at least 2 frames away
                offset = int(rng.integers(2, t_frames - 1)) if t_frames > 3 else 2
                ta = (t + offset) % t_frames
            windows.append(audio_window(clip.audio, ta, clip.audio_rate, win))
            frames.append(clip.frames[t])
            labels.append(1.0 if positive else 0.0)
        scores = scorer.scores(np.stack(windows), np.stack(frames))
        loss = bce(scores.clamp(1e-6, 1 - 1e-6), torch.tensor(labels, dtype=scores.dtype))
        if not torch.isfinite(loss):
            raise TrainingDivergedError(f"sync scorer loss non-finite at step {step}")
        opt.zero_grad()
        loss.backward()
        opt.step()
        history.append(loss.item())

    scorer.trained_flag.fill_(1.0)
    val_clips = corpus.val if corpus.val else clips
    accuracy = sync_validation_accuracy(scorer, val_clips, rng)

    ckpt = Checkpoint(
        module=MODULE_ID,
        step=tr.steps,
        config=config_to_dict(cfg),
        config_hash=config_hash(cfg),
        arrays=state_to_arrays(scorer),
        meta={
            "embed_dim": cfg.sync.embed_dim,
            "audio_window": win,
            "validation_accuracy": accuracy,
            "final_loss": history[-1] if history else None,
        },
    )
    return ckpt, history


def sync_scorer_from_checkpoint(ckpt: Checkpoint) -> SyncScorer:
    from ..config import config_from_dict

    ckpt.require_module(MODULE_ID)
    scorer = build_sync_scorer(config_from_dict(ckpt.config))
    arrays_to_state(scorer, ckpt.arrays)
    scorer.eval()
    return scorer
