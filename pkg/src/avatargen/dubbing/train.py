"""Dubbing training: alternating generator/discriminator updates under the
perception + lip-sync + GAN objective, with a frozen sync scorer."""
from __future__ import annotations

import numpy as np
import torch

from ..checkpoint import Checkpoint
from ..config import Config, config_hash, config_to_dict
from ..errors import TrainingDivergedError, ValidationError
from ..faceswap.model import LayeredDiscriminator
from ..syndata import Corpus, SyntheticClip, apply_mouth_mask, audio_window
from ..torchutil import arrays_to_state, seed_everything, single_threaded, state_to_arrays, to_tensor
from .losses import FrozenPyramid, dubbing_total_loss, gan_losses, lip_sync_penalty, perception_loss
from .model import DubbingModel
from .sync import SyncScorer

MODULE_ID = "dubbing"


def build_dubbing_model(cfg: Config) -> DubbingModel:
    d = cfg.dubbing
    return DubbingModel(base_channels=d.base_channels, audio_dim=d.audio_dim,
                        audio_window=d.audio_window)


def clip_training_arrays(clip: SyntheticClip, template, window: int):
    """(masked sources, ground truth, per-frame audio windows) for one clip."""
    t_frames = clip.frames.shape[0]
    masked = apply_mouth_mask(clip.frames, template)
    windows = np.stack([
        audio_window(clip.audio, t, clip.audio_rate, window) for t in range(t_frames)
    ])
    return masked, clip.frames, windows


def reference_indices(t_frames: int, rng: np.random.Generator) -> np.ndarray:
    """A different frame of the same clip serves as texture reference."""
    idx = rng.integers(1, t_frames, size=t_frames)
    return (np.arange(t_frames) + idx) % t_frames


def train_dubbing(corpus: Corpus, sync_scorer: SyncScorer,
                  cfg: Config) -> tuple[Checkpoint, dict[str, list[float]]]:
    if not sync_scorer.is_trained:
        raise ValidationError("train_dubbing requires a trained sync scorer checkpoint")
    if not corpus.train:
        raise ValidationError("corpus has no training clips")
    single_threaded()
    d = cfg.dubbing
    tr = d.train
    seed_everything(tr.seed)
    rng = np.random.default_rng(tr.seed)

    model = build_dubbing_model(cfg)
    disc = LayeredDiscriminator(d.base_channels, 4)
    pyramid = FrozenPyramid(d.perception_layers, d.perception_seed)
    for p in sync_scorer.parameters():
        p.requires_grad_(False)

    gen_opt = torch.optim.Adam(model.parameters(), lr=tr.lr)
    disc_opt = torch.optim.Adam(disc.parameters(), lr=tr.lr)

    prepared = [
        clip_training_arrays(c, corpus.template_by_id(c.template_id), d.audio_window)
        for c in corpus.train
    ]

    history: dict[str, list[float]] = {
        k: [] for k in ("perception", "sync", "gan_generator", "gan_discriminator", "total")
    }
    for step in range(tr.steps):
        masked, truth, windows = prepared[int(rng.integers(len(prepared)))]
        t_frames = truth.shape[0]
        pick = rng.integers(t_frames, size=min(tr.batch_size, t_frames))
        refs = reference_indices(t_frames, rng)
        src = to_tensor(masked[pick])
        ref = to_tensor(truth[refs[pick]])
        gt = to_tensor(truth[pick])
        win = to_tensor(windows[pick])

        with torch.no_grad():
            fake = model(src, ref, win)
        l_d, _ = gan_losses(disc(gt), disc(fake))
        if not torch.isfinite(l_d):
            raise TrainingDivergedError(f"gan_discriminator loss non-finite at step {step}")
        disc_opt.zero_grad()
        l_d.backward()
        disc_opt.step()

        out = model(src, ref, win)
        l_p = perception_loss(out, gt, pyramid)
        l_sync = lip_sync_penalty(sync_scorer.scores(win, out))
        _, l_g = gan_losses(disc(gt), disc(out))
        total = dubbing_total_loss(l_p, l_sync, l_g, d.weights.perception, d.weights.sync)
        for name, val in (("perception", l_p), ("sync", l_sync),
                          ("gan_generator", l_g), ("total", total)):
            if not torch.isfinite(val):
                raise TrainingDivergedError(f"{name} loss non-finite at step {step}")
            history[name].append(val.item())
        history["gan_discriminator"].append(l_d.item())
        gen_opt.zero_grad()
        total.backward()
        gen_opt.step()

    arrays = state_to_arrays(model)
    arrays |= {f"disc.{k}": v for k, v in state_to_arrays(disc).items()}
    ckpt = Checkpoint(
        module=MODULE_ID,
        step=tr.steps,
        config=config_to_dict(cfg),
        config_hash=config_hash(cfg),
        arrays=arrays,
        meta={
            "base_channels": d.base_channels,
            "audio_dim": d.audio_dim,
            "audio_window": d.audio_window,
            "resolution": corpus.config.resolution,
            "final_losses": {k: v[-1] for k, v in history.items() if v},
        },
    )
    return ckpt, history


def dubbing_model_from_checkpoint(ckpt: Checkpoint) -> DubbingModel:
    from ..config import config_from_dict

    ckpt.require_module(MODULE_ID)
    model = build_dubbing_model(config_from_dict(ckpt.config))
    arrays_to_state(model, {k: v for k, v in ckpt.arrays.items() if not k.startswith("disc.")})
    model.eval()
    return model
