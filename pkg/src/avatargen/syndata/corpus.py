"""Corpus construction: deterministic train/val splits of synthetic clips."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..config import CorpusConfig, config_hash
from ..errors import ValidationError
from ..fileio import save_frames_dir
from .clips import SyntheticClip, silence_ids, synthesize_clip
from .language import LanguageInventory, LanguageRegistry
from .templates import AvatarTemplate, make_templates


@dataclass
class Corpus:
    config: CorpusConfig
    registry: LanguageRegistry
    inventory: LanguageInventory  # combined over all corpus languages
    templates: list[AvatarTemplate]
    train: list[SyntheticClip]
    val: list[SyntheticClip]

    @property
    def n_speakers(self) -> int:
        return self.config.speakers

    @property
    def audio_rate(self) -> int:
        return self.config.audio_frames_per_video_frame

    def all_clips(self) -> list[SyntheticClip]:
        return self.train + self.val

    def template_by_id(self, template_id: str) -> AvatarTemplate:
        for t in self.templates:
            if t.template_id == template_id:
                return t
        raise ValidationError(f"unknown template '{template_id}'")


def _split_sizes(n: int, fraction: float) -> int:
    n_train = int(round(fraction * n))
    return min(max(n_train, 1), n - 1)


def make_corpus(cfg: CorpusConfig) -> Corpus:
    if cfg.clips < 2:
        raise ValidationError(f"corpus needs >= 2 clips, got {cfg.clips}")
    if not (0.0 < cfg.train_fraction < 1.0):
        raise ValidationError("train_fraction must be in (0, 1)")
    if cfg.min_phonemes < 1 or cfg.max_phonemes < cfg.min_phonemes:
        raise ValidationError("bad phoneme count range")

    registry = LanguageRegistry.from_tags(cfg.languages)
    inventory = registry.combined()
    templates = make_templates(cfg.templates, cfg.seed, cfg.resolution)
    rng = np.random.default_rng(cfg.seed)

    clips = []
    for i in range(cfg.clips):
        tag = cfg.languages[i % len(cfg.languages)]
        lo, hi = registry.id_range(tag)
        template = templates[int(rng.integers(len(templates)))]
        speaker = int(rng.integers(cfg.speakers))
        length = int(rng.integers(cfg.min_phonemes, cfg.max_phonemes + 1))
        phonemes = [int(rng.integers(lo, hi)) for _ in range(length)]
        clip_seed = int(rng.integers(2**31))
        clips.append(
            synthesize_clip(
                template, phonemes, speaker, clip_seed,
                inventory=inventory,
                n_speakers=cfg.speakers,
                frames_per_phoneme=cfg.frames_per_phoneme,
                audio_frames_per_video_frame=cfg.audio_frames_per_video_frame,
            )
        )

    order = rng.permutation(cfg.clips)
    n_train = _split_sizes(cfg.clips, cfg.train_fraction)
    train = [clips[int(j)] for j in order[:n_train]]
    val = [clips[int(j)] for j in order[n_train:]]
    return Corpus(cfg, registry, inventory, templates, train, val)


def export_corpus(corpus: Corpus, directory: str | Path) -> Path:
    """Write frames as PNGs plus raw array files and a manifest."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {
        "config": corpus.config.__dict__ | {"languages": list(corpus.config.languages)},
        "config_hash": config_hash(corpus.config.__dict__),
        "inventory": list(corpus.inventory.phonemes),
        "splits": {},
    }
    for split_name, clips in (("train", corpus.train), ("val", corpus.val)):
        entries = []
        for k, clip in enumerate(clips):
            clip_dir = directory / split_name / f"clip_{k:04d}"
            save_frames_dir(clip.frames, clip_dir / "frames")
            np.save(clip_dir / "audio.npy", clip.audio)
            np.save(clip_dir / "mouth_aperture.npy", clip.mouth_aperture)
            np.save(clip_dir / "logf0.npy", clip.prosody.logf0)
            np.save(clip_dir / "uv.npy", clip.prosody.uv)
            entries.append({
                "dir": f"{split_name}/clip_{k:04d}",
                "phonemes": clip.phonemes,
                "speaker_id": clip.speaker_id,
                "template_id": clip.template_id,
                "language_tag": clip.language_tag,
                "frames": int(clip.frames.shape[0]),
                "audio_frames": int(clip.audio.shape[0]),
            })
        manifest["splits"][split_name] = entries
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True))
    return directory


__all__ = [
    "Corpus", "make_corpus", "export_corpus", "silence_ids",
]
