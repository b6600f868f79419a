"""Voice-conversion training (teacher-forced L1 + stop loss) and the full
conversion chain from source audio to waveform."""
from __future__ import annotations

import numpy as np
import torch
from torch.nn import functional as F

from ..checkpoint import Checkpoint
from ..config import Config, config_hash, config_to_dict
from ..errors import TrainingDivergedError, ValidationError
from ..recognizer import Recognizer
from ..syndata import Corpus, ProsodyTrack
from ..torchutil import arrays_to_state, seed_everything, single_threaded, state_to_arrays, to_tensor
from .model import Synthesizer
from .prosody import SpeakerProfile, convert_f0, interpolate_prosody, one_hot, speaker_stats
from .vocoder import toy_vocoder

MODULE_ID = "voiceconv"


def build_synthesizer(cfg: Config, bnf_dim: int, n_speakers: int) -> Synthesizer:
    v = cfg.voiceconv
    return Synthesizer(
        bnf_dim=bnf_dim,
        n_speakers=n_speakers,
        encoder_dim=v.encoder_dim,
        pitch_channels=v.pitch_channels,
        decoder_dim=v.decoder_dim,
        n_mixtures=v.attention_mixtures,
        output_dim=v.output_dim,
    )


def align_bnf(bnf: np.ndarray, length: int, downsample: int = 2) -> np.ndarray:
    """Nearest-frame repetition back to the prosody frame rate."""
    up = np.repeat(bnf, downsample, axis=0)
    if up.shape[0] >= length:
        return up[:length]
    pad = np.repeat(up[-1:], length - up.shape[0], axis=0)
    return np.concatenate([up, pad], axis=0)


def corpus_speaker_profiles(corpus: Corpus) -> list[SpeakerProfile]:
    profiles = []
    for sid in range(corpus.n_speakers):
        tracks = [c.prosody for c in corpus.train if c.speaker_id == sid]
        if not tracks:
            tracks = [c.prosody for c in corpus.all_clips() if c.speaker_id == sid]
        profiles.append(speaker_stats(tracks, sid, corpus.n_speakers))
    return profiles


def train_synthesizer(corpus: Corpus, recognizer: Recognizer,
                      cfg: Config) -> tuple[Checkpoint, list[float]]:
    if not corpus.train:
        raise ValidationError("corpus has no training clips")
    single_threaded()
    tr = cfg.voiceconv.train
    seed_everything(tr.seed)
    model = build_synthesizer(cfg, recognizer.bottleneck_dim, corpus.n_speakers)
    opt = torch.optim.Adam(model.parameters(), lr=tr.lr)
    rng = np.random.default_rng(tr.seed)
    profiles = corpus_speaker_profiles(corpus)

    # BNF extraction is deterministic in eval mode: cache one pass per clip
    prepared = []
    for clip in corpus.train:
        bnf = align_bnf(recognizer.extract_bnf(clip.audio), clip.audio.shape[0])
        logf0, uv = interpolate_prosody(clip.prosody)
        prepared.append((bnf, logf0, uv, clip.audio, clip.speaker_id))

    history = []
    for step in range(tr.steps):
        opt.zero_grad()
        tf_ramp = step / max(tr.steps - 1, 1)
        sample_own = (1.0 - cfg.voiceconv.teacher_forcing_end) * tf_ramp
        picks = rng.integers(len(prepared), size=min(tr.batch_size, len(prepared)))
        losses = []
        for i in picks:
            bnf, logf0, uv, target_spectra, sid = prepared[int(i)]
            memory = model.encode(bnf, logf0, uv, profiles[sid])
            targets = to_tensor(target_spectra, model._dtype())
            frames, stops = model.teacher_forced(memory, targets, sample_own, rng)
            stop_targets = torch.zeros_like(stops)
            stop_targets[-1] = 1.0
            l1 = (frames - targets).abs().mean()
            stop_loss = F.binary_cross_entropy(stops, stop_targets)
            losses.append(l1 + 0.1 * stop_loss)
        loss = torch.stack(losses).mean()
        if not torch.isfinite(loss):
            raise TrainingDivergedError(f"synthesizer loss became non-finite at step {step}")
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
            "bnf_dim": recognizer.bottleneck_dim,
            "n_speakers": corpus.n_speakers,
            "output_dim": cfg.voiceconv.output_dim,
            "speaker_mu": [p.mu for p in profiles],
            "speaker_theta": [p.theta for p in profiles],
            "final_loss": history[-1] if history else None,
        },
    )
    return ckpt, history


def synthesizer_from_checkpoint(ckpt: Checkpoint) -> Synthesizer:
    from ..config import config_from_dict

    ckpt.require_module(MODULE_ID)
    cfg = config_from_dict(ckpt.config)
    model = build_synthesizer(cfg, ckpt.meta["bnf_dim"], ckpt.meta["n_speakers"])
    arrays_to_state(model, ckpt.arrays)
    model.eval()
    return model


def profile_from_checkpoint(ckpt: Checkpoint, speaker_id: int) -> SpeakerProfile:
    ckpt.require_module(MODULE_ID)
    mus, thetas = ckpt.meta["speaker_mu"], ckpt.meta["speaker_theta"]
    if not (0 <= speaker_id < len(mus)):
        raise ValidationError(f"speaker {speaker_id} not in checkpoint (has {len(mus)})")
    return SpeakerProfile(speaker_id, mus[speaker_id], thetas[speaker_id],
                          one_hot(speaker_id, len(mus)))


def convert_voice(
    source_audio: np.ndarray,
    source_prosody: ProsodyTrack,
    target: SpeakerProfile,
    recognizer: Recognizer,
    synthesizer: Synthesizer,
    sample_rate: int = 16000,
    frame_rate: int = 100,
) -> tuple[np.ndarray, np.ndarray]:
    """extract BNF -> interpolate prosody -> transfer log-F0 -> synthesize
    spectra -> vocode. Returns (waveform, converted spectra)."""
    if recognizer.bottleneck_dim != synthesizer.bnf_dim:
        raise ValidationError(
            f"recognizer bottleneck_dim={recognizer.bottleneck_dim} does not match "
            f"synthesizer bnf_dim={synthesizer.bnf_dim}"
        )
    bnf = align_bnf(recognizer.extract_bnf(source_audio), source_audio.shape[0])
    logf0, uv = interpolate_prosody(source_prosody)
    source_profile = speaker_stats(source_prosody, 0, 1)
    logf0_vc = convert_f0(logf0, source_profile, target)
    spectra = synthesizer.synthesize_spectra(bnf, (logf0_vc, uv), target)
    wave = toy_vocoder(spectra, sample_rate, frame_rate)
    return wave, spectra
