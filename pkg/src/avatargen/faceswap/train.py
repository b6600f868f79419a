"""Face-swap training: contrastive identity pretrain, then alternating
generator/discriminator updates with the weighted loss suite."""
from __future__ import annotations

import numpy as np
import torch

from ..checkpoint import Checkpoint
from ..config import Config, config_hash, config_to_dict
from ..errors import TrainingDivergedError, ValidationError
from ..gan import lsgan_discriminator_loss, lsgan_generator_loss
from ..syndata import Corpus, render_face
from ..torchutil import arrays_to_state, seed_everything, single_threaded, state_to_arrays, to_tensor
from .losses import (
    SwapLossWeights,
    identity_loss,
    reconstruction_loss,
    swap_total_loss,
    weak_feature_matching_loss,
)
from .model import SwapModel

MODULE_ID = "faceswap"


def build_swap_model(cfg: Config) -> SwapModel:
    f = cfg.faceswap
    return SwapModel(id_dim=f.id_dim, base_channels=f.base_channels, disc_layers=f.disc_layers)


def swap_weights(cfg: Config) -> SwapLossWeights:
    f = cfg.faceswap
    return SwapLossWeights(
        identity=f.weights.identity,
        reconstruction=f.weights.reconstruction,
        feature_match=f.weights.feature_match,
        feature_match_start=f.feature_match_start,
    )


def render_pool(corpus: Corpus, per_template: int, seed: int) -> tuple[torch.Tensor, np.ndarray]:
    """Varied renders of every template: (images [N,3,H,W], template index [N])."""
    rng = np.random.default_rng(seed)
    images, owners = [], []
    for ti, template in enumerate(corpus.templates):
        for _ in range(per_template):
            aperture = float(rng.uniform(0, 1))
            jitter = rng.uniform([-2, -2, -3], [2, 2, 3])
            images.append(render_face(template, aperture, jitter)[0])
            owners.append(ti)
    return to_tensor(np.stack(images)), np.array(owners)


def _pretrain_identity(model: SwapModel, images, owners, steps: int, lr: float,
                       rng: np.random.Generator) -> None:
    """Margin contrastive objective: same template close, different far."""
    opt = torch.optim.Adam(model.id_extractor.parameters(), lr=lr)
    margin = 1.0
    n = images.shape[0]
    for step in range(steps):
        idx = rng.integers(n, size=8)
        emb = model.id_extractor(images[idx])
        loss = emb.new_zeros(())
        pairs = 0
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                d = (emb[a] - emb[b]).norm()
                if owners[idx[a]] == owners[idx[b]]:
                    loss = loss + d**2
                else:
                    loss = loss + torch.clamp(margin - d, min=0.0) ** 2
                pairs += 1
        loss = loss / pairs
        if not torch.isfinite(loss):
            raise TrainingDivergedError(f"identity pretrain loss non-finite at step {step}")
        opt.zero_grad()
        loss.backward()
        opt.step()


def train_faceswap(corpus: Corpus, cfg: Config) -> tuple[Checkpoint, dict[str, list[float]]]:
    if len(corpus.templates) < 2:
        raise ValidationError("face-swap training needs >= 2 templates (distinct identities)")
    single_threaded()
    f = cfg.faceswap
    tr = f.train
    seed_everything(tr.seed)
    rng = np.random.default_rng(tr.seed)
    model = build_swap_model(cfg)
    weights = swap_weights(cfg)

    images, owners = render_pool(corpus, per_template=8, seed=tr.seed + 1)
    _pretrain_identity(model, images, owners, f.id_train_steps, tr.lr, rng)
    for p in model.id_extractor.parameters():  # frozen, like an external FR net
        p.requires_grad_(False)

    gen_opt = torch.optim.Adam(model.generator.parameters(), lr=tr.lr)
    disc_params = [p for d in model.discriminators for p in d.parameters()]
    disc_opt = torch.optim.Adam(disc_params, lr=tr.lr)

    history: dict[str, list[float]] = {
        k: [] for k in ("identity", "reconstruction", "adversarial", "feature_match", "disc", "total")
    }
    n = images.shape[0]
    for step in range(tr.steps):
        k = min(tr.batch_size, n)
        tgt_idx = rng.integers(n, size=k)
        self_pair = rng.uniform(size=k) < 0.5
        src_idx = np.array([
            int(ti) if sp else int(rng.choice(np.flatnonzero(owners != owners[ti])))
            for ti, sp in zip(tgt_idx, self_pair)
        ])
        src, tgt = images[src_idx], images[tgt_idx]

        # discriminator update
        with torch.no_grad():
            fake = model.generator(tgt, model.id_extractor(src))
        d_loss = sum(
            lsgan_discriminator_loss(d(r), d(g))
            for d, r, g in zip(model.discriminators, model.disc_inputs(tgt), model.disc_inputs(fake))
        )
        if not torch.isfinite(d_loss):
            raise TrainingDivergedError(f"discriminator loss non-finite at step {step}")
        disc_opt.zero_grad()
        d_loss.backward()
        disc_opt.step()

        # generator update
        v_src = model.id_extractor(src)
        out = model.generator(tgt, v_src)
        v_out = model.id_extractor(out)
        l_id = torch.stack([identity_loss(v_out[i], v_src[i]) for i in range(k)]).mean()
        same = torch.as_tensor(self_pair)
        l_rec = (
            (out[same] - tgt[same]).abs().mean()
            if bool(same.any())
            else out.new_zeros(())
        )
        l_adv = sum(
            lsgan_generator_loss(d(g))
            for d, g in zip(model.discriminators, model.disc_inputs(out))
        )
        l_wfm = sum(
            weak_feature_matching_loss(d, g, r, f.feature_match_start)
            for d, g, r in zip(model.discriminators, model.disc_inputs(out), model.disc_inputs(tgt))
        )
        total = swap_total_loss(l_id, l_rec, l_adv, l_wfm, weights)
        for name, val in (("identity", l_id), ("reconstruction", l_rec),
                          ("adversarial", l_adv), ("feature_match", l_wfm), ("total", total)):
            if not torch.isfinite(val):
                raise TrainingDivergedError(f"{name} loss non-finite at step {step}")
            history[name].append(val.item())
        history["disc"].append(d_loss.item())
        gen_opt.zero_grad()
        total.backward()
        gen_opt.step()

    ckpt = Checkpoint(
        module=MODULE_ID,
        step=tr.steps,
        config=config_to_dict(cfg),
        config_hash=config_hash(cfg),
        arrays=state_to_arrays(model),
        meta={
            "id_dim": f.id_dim,
            "base_channels": f.base_channels,
            "disc_layers": f.disc_layers,
            "resolution": corpus.config.resolution,
            "final_losses": {k: v[-1] for k, v in history.items() if v},
        },
    )
    return ckpt, history


def swap_model_from_checkpoint(ckpt: Checkpoint) -> SwapModel:
    from ..config import config_from_dict

    ckpt.require_module(MODULE_ID)
    model = build_swap_model(config_from_dict(ckpt.config))
    arrays_to_state(model, ckpt.arrays)
    model.eval()
    return model


@torch.no_grad()
def swap_forward(model: SwapModel, source: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Swap source identity onto target frames; [*,3,H,W] in, same shape out."""
    was_training = model.training
    model.eval()
    try:
        src = to_tensor(np.asarray(source))
        tgt = to_tensor(np.asarray(target))
        squeeze = tgt.ndim == 3
        if src.ndim == 3:
            src = src[None]
        if tgt.ndim == 3:
            tgt = tgt[None]
        if src.shape[0] == 1 and tgt.shape[0] > 1:
            src = src.expand(tgt.shape[0], -1, -1, -1)
        out = model.swap(src, tgt).cpu().numpy()
        return out[0] if squeeze else out
    finally:
        model.train(was_training)
