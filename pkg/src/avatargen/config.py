"""Hierarchical run configuration.

One YAML file configures every module (seeds, dims, loss weights, timing).
Unknown keys are rejected so typos fail loudly instead of silently using a
default. ``config_hash`` of the effective config is recorded in every
checkpoint and report.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ConfigError


@dataclass
class TrainConfig:
    steps: int = 500
    lr: float = 1e-3
    seed: int = 0
    batch_size: int = 4
    log_every: int = 50


@dataclass
class CorpusConfig:
    clips: int = 24
    speakers: int = 4
    templates: int = 2
    languages: list[str] = field(default_factory=lambda: ["en"])
    resolution: int = 64
    frames_per_phoneme: int = 3
    min_phonemes: int = 4
    max_phonemes: int = 8
    audio_frames_per_video_frame: int = 4
    train_fraction: float = 0.8
    seed: int = 7


@dataclass
class RecognizerConfig:
    prenet_channels: int = 8
    hidden_dim: int = 48
    bottleneck_dim: int = 32
    decoder_dim: int = 48
    attention_dim: int = 32
    ctc_weight: float = 0.3
    train: TrainConfig = field(default_factory=lambda: TrainConfig(steps=400, lr=2e-3, seed=1))


@dataclass
class VoiceConvConfig:
    encoder_dim: int = 48
    pitch_channels: int = 16
    decoder_dim: int = 64
    attention_mixtures: int = 5
    output_dim: int = 29
    teacher_forcing_end: float = 0.7
    train: TrainConfig = field(default_factory=lambda: TrainConfig(steps=800, lr=2e-3, seed=2))


@dataclass
class SwapWeights:
    identity: float = 5.0
    reconstruction: float = 10.0
    feature_match: float = 10.0


@dataclass
class FaceSwapConfig:
    id_dim: int = 16
    base_channels: int = 16
    disc_layers: int = 4
    feature_match_start: int = 2
    weights: SwapWeights = field(default_factory=SwapWeights)
    id_train_steps: int = 300
    train: TrainConfig = field(default_factory=lambda: TrainConfig(steps=500, lr=1e-3, seed=3))


@dataclass
class SyncConfig:
    embed_dim: int = 16
    base_channels: int = 16
    audio_window: int = 9
    train: TrainConfig = field(default_factory=lambda: TrainConfig(steps=600, lr=1e-3, seed=4, batch_size=16))


@dataclass
class DubbingWeights:
    perception: float = 1.0
    sync: float = 0.3


@dataclass
class DubbingConfig:
    base_channels: int = 24
    audio_dim: int = 32
    audio_window: int = 9
    perception_layers: int = 3
    perception_seed: int = 1234
    weights: DubbingWeights = field(default_factory=DubbingWeights)
    train: TrainConfig = field(default_factory=lambda: TrainConfig(steps=800, lr=1e-3, seed=5, batch_size=4))


@dataclass
class GenerationConfig:
    fps: int = 25
    sample_rate: int = 16000
    source_aperture: float = 0.2
    source_speaker: int = 0
    seed: int = 11


@dataclass
class Config:
    seed: int = 0
    corpus: CorpusConfig = field(default_factory=CorpusConfig)
    recognizer: RecognizerConfig = field(default_factory=RecognizerConfig)
    voiceconv: VoiceConvConfig = field(default_factory=VoiceConvConfig)
    faceswap: FaceSwapConfig = field(default_factory=FaceSwapConfig)
    sync: SyncConfig = field(default_factory=SyncConfig)
    dubbing: DubbingConfig = field(default_factory=DubbingConfig)
    generation: GenerationConfig = field(default_factory=GenerationConfig)


def _build(cls, data, path):
    if not isinstance(data, dict):
        raise ConfigError(f"{path or 'config'}: expected a mapping, got {type(data).__name__}")
    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = set(data) - set(fields)
    if unknown:
        raise ConfigError(f"{path or 'config'}: unknown keys {sorted(unknown)}")
    kwargs = {}
    for name, value in data.items():
        f = fields[name]
        sub = f"{path}.{name}" if path else name
        if dataclasses.is_dataclass(f.type) or (isinstance(f.type, str) and f.type in _SECTION_TYPES):
            typ = _SECTION_TYPES[f.type] if isinstance(f.type, str) else f.type
            kwargs[name] = _build(typ, value, sub)
        else:
            kwargs[name] = value
    return cls(**kwargs)


_SECTION_TYPES = {
    cls.__name__: cls
    for cls in (
        TrainConfig, CorpusConfig, RecognizerConfig, VoiceConvConfig, SwapWeights,
        FaceSwapConfig, SyncConfig, DubbingWeights, DubbingConfig, GenerationConfig,
    )
}


def config_from_dict(data: dict | None) -> Config:
    """Build a Config from a nested dict, rejecting unknown keys."""
    return _build(Config, data or {}, "")


def load_config(path: str | Path) -> Config:
    text = Path(path).read_text()
    data = yaml.safe_load(text)
    if data is None:
        data = {}
    return config_from_dict(data)


def config_to_dict(cfg: Config | object) -> dict:
    return dataclasses.asdict(cfg)


def config_hash(cfg: Config | dict) -> str:
    """Stable hash of the effective configuration."""
    data = cfg if isinstance(cfg, dict) else config_to_dict(cfg)
    blob = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def dump_effective_config(cfg: Config, path: str | Path) -> None:
    """Write the effective-config echo every run is required to leave behind."""
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(yaml.safe_dump(config_to_dict(cfg), sort_keys=True))
