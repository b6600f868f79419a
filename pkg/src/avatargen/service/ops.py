"""Application service layer: every CLI verb and HTTP endpoint lands here.

Each op resolves its configuration, runs the corresponding library call, and
returns a JSON-serializable dict.
"""
from __future__ import annotations

import dataclasses
import json
from pathlib import Path

import numpy as np

from ..checkpoint import load_checkpoint, save_checkpoint
from ..config import Config, config_from_dict, config_hash, load_config
from ..dubbing import sync_scorer_from_checkpoint, train_dubbing, train_sync_scorer
from ..errors import ValidationError
from ..faceswap import train_faceswap
from ..fileio import load_frames_dir, load_waveform
from ..metrics import evaluate_frames
from ..pipeline import GenerationRequest, generate, generate_batch, text_to_phonemes_global
from ..recognizer import recognizer_from_checkpoint, train_recognizer
from ..syndata import LanguageRegistry, export_corpus, make_corpus
from ..voiceconv import analyze_waveform, train_synthesizer


def resolve_config(config: dict | None = None, config_path: str | None = None) -> Config:
    if config is not None and config_path is not None:
        raise ValidationError("give either an inline config or a config path, not both")
    if config_path is not None:
        return load_config(config_path)
    return config_from_dict(config)


def _train_summary(ckpt, path: str) -> dict:
    saved = save_checkpoint(ckpt, path)
    return {
        "module": ckpt.module,
        "checkpoint": str(saved),
        "steps": ckpt.step,
        "config_hash": ckpt.config_hash,
        "final_loss": ckpt.meta.get("final_loss", ckpt.meta.get("final_losses")),
    }


def train_recognizer_op(cfg: Config, out: str) -> dict:
    corpus = make_corpus(cfg.corpus)
    ckpt, _ = train_recognizer(corpus, cfg)
    return _train_summary(ckpt, out)


def train_voiceconv_op(cfg: Config, recognizer_path: str, out: str) -> dict:
    corpus = make_corpus(cfg.corpus)
    recognizer = recognizer_from_checkpoint(load_checkpoint(recognizer_path))
    ckpt, _ = train_synthesizer(corpus, recognizer, cfg)
    return _train_summary(ckpt, out)


def train_faceswap_op(cfg: Config, out: str) -> dict:
    corpus = make_corpus(cfg.corpus)
    ckpt, _ = train_faceswap(corpus, cfg)
    return _train_summary(ckpt, out)


def train_sync_op(cfg: Config, out: str) -> dict:
    corpus = make_corpus(cfg.corpus)
    ckpt, _ = train_sync_scorer(corpus, cfg)
    summary = _train_summary(ckpt, out)
    summary["validation_accuracy"] = ckpt.meta["validation_accuracy"]
    return summary


def train_dubbing_op(cfg: Config, sync_path: str, out: str) -> dict:
    corpus = make_corpus(cfg.corpus)
    scorer = sync_scorer_from_checkpoint(load_checkpoint(sync_path))
    ckpt, _ = train_dubbing(corpus, scorer, cfg)
    return _train_summary(ckpt, out)


def generate_op(request: GenerationRequest, cfg: Config) -> dict:
    return generate(request, cfg)


def generate_batch_op(requests: list[GenerationRequest], cfg: Config) -> list[dict]:
    return generate_batch(requests, cfg)


def _resolve_frames(path: str) -> np.ndarray:
    p = Path(path)
    if (p / "frames").is_dir():
        return load_frames_dir(p / "frames")
    return load_frames_dir(p)


def _resolve_audio(reference: str, audio: str | None, cfg: Config) -> np.ndarray:
    candidates = []
    if audio is not None:
        candidates.append(Path(audio))
    else:
        candidates.extend(Path(reference) / name for name in ("audio.npy", "audio.raw"))
    for p in candidates:
        if p.suffix == ".npy" and p.exists():
            return np.load(p)
        if p.suffix == ".raw" and p.exists():
            wave, sr = load_waveform(p)
            frame_rate = cfg.generation.fps * cfg.corpus.audio_frames_per_video_frame
            from ..syndata import FEATURE_DIM

            return analyze_waveform(wave, FEATURE_DIM, sr, frame_rate)
    raise ValidationError(
        f"no audio found (looked for {[str(c) for c in candidates]}); pass --audio"
    )


def evaluate_op(generated: str, reference: str, scorer_path: str, cfg: Config,
                audio: str | None = None, out: str | None = None) -> dict:
    scorer = sync_scorer_from_checkpoint(load_checkpoint(scorer_path))
    report = evaluate_frames(
        _resolve_frames(generated),
        _resolve_frames(reference),
        _resolve_audio(reference, audio, cfg),
        scorer,
        config_echo={"config_hash": config_hash(cfg)},
    )
    data = dataclasses.asdict(report)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(json.dumps(data, sort_keys=True, indent=1))
    return data


def export_corpus_op(cfg: Config, out: str) -> dict:
    corpus = make_corpus(cfg.corpus)
    export_corpus(corpus, out)
    return {
        "directory": str(out),
        "train_clips": len(corpus.train),
        "val_clips": len(corpus.val),
        "config_hash": config_hash(cfg.corpus.__dict__ | {"languages": list(cfg.corpus.languages)}),
    }


def phonemes_op(text: str, language_tag: str, cfg: Config) -> dict:
    registry = LanguageRegistry.from_tags(cfg.corpus.languages)
    ids = text_to_phonemes_global(text, language_tag, registry)
    return {"language_tag": language_tag, "phonemes": ids}
