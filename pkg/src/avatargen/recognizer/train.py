"""Recognizer training: overfit-friendly Adam loop with divergence checks."""
from __future__ import annotations

import numpy as np
import torch

from ..checkpoint import Checkpoint
from ..config import Config, config_hash, config_to_dict
from ..errors import TrainingDivergedError, ValidationError
from ..syndata import FEATURE_DIM, Corpus
from ..torchutil import arrays_to_state, seed_everything, single_threaded, state_to_arrays
from .model import HybridLossConfig, Recognizer

MODULE_ID = "recognizer"


def build_recognizer(cfg: Config, inventory_size: int, blank_id: int) -> Recognizer:
    r = cfg.recognizer
    return Recognizer(
        input_dim=FEATURE_DIM,
        inventory_size=inventory_size,
        blank_id=blank_id,
        prenet_channels=r.prenet_channels,
        hidden_dim=r.hidden_dim,
        bottleneck_dim=r.bottleneck_dim,
        decoder_dim=r.decoder_dim,
        attention_dim=r.attention_dim,
    )


def train_recognizer(corpus: Corpus, cfg: Config) -> tuple[Checkpoint, list[float]]:
    if not corpus.train:
        raise ValidationError("corpus has no training clips")
    single_threaded()
    tr = cfg.recognizer.train
    seed_everything(tr.seed)
    model = build_recognizer(cfg, corpus.inventory.size, corpus.inventory.blank_id)
    opt = torch.optim.Adam(model.parameters(), lr=tr.lr)
    loss_cfg = HybridLossConfig(cfg.recognizer.ctc_weight)
    rng = np.random.default_rng(tr.seed)

    history = []
    for step in range(tr.steps):
        opt.zero_grad()
        picks = rng.integers(len(corpus.train), size=min(tr.batch_size, len(corpus.train)))
        losses = [
            model.hybrid_loss(corpus.train[int(i)].audio, corpus.train[int(i)].phonemes, loss_cfg)
            for i in picks
        ]
        loss = torch.stack(losses).mean()
        if not torch.isfinite(loss):
            raise TrainingDivergedError(
                f"recognizer hybrid loss became non-finite at step {step}"
            )
        loss.backward()
        opt.step()
        history.append(loss.item())

    ckpt = Checkpoint(
        module=MODULE_ID,
        step=tr.steps,
        config=config_to_dict(cfg),
        config_hash=config_hash(cfg),
        arrays=state_to_arrays(model),
        meta={
            "input_dim": FEATURE_DIM,
            "inventory_size": corpus.inventory.size,
            "blank_id": corpus.inventory.blank_id,
            "inventory": list(corpus.inventory.phonemes),
            "bottleneck_dim": cfg.recognizer.bottleneck_dim,
            "time_downsample": 2,
            "ctc_weight": cfg.recognizer.ctc_weight,
            "final_loss": history[-1] if history else None,
        },
    )
    return ckpt, history


def recognizer_from_checkpoint(ckpt: Checkpoint) -> Recognizer:
    from ..config import config_from_dict

    ckpt.require_module(MODULE_ID)
    cfg = config_from_dict(ckpt.config)
    model = build_recognizer(cfg, ckpt.meta["inventory_size"], ckpt.meta["blank_id"])
    arrays_to_state(model, ckpt.arrays)
    model.eval()
    return model
