"""End-to-end generation: text -> phonemes -> synthetic speech features ->
voice conversion -> optional face swap -> per-frame dubbing -> frames plus
waveform plus manifest on disk.
"""
from __future__ import annotations

import json
import math
import shutil
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..checkpoint import load_checkpoint
from ..config import Config, config_hash, config_to_dict, dump_effective_config
from ..dubbing import dub_frame, dubbing_model_from_checkpoint
from ..errors import PipelineStageError, ValidationError
from ..faceswap import swap_forward, swap_model_from_checkpoint
from ..fileio import load_frame_png, save_frames_dir, save_waveform
from ..recognizer import recognizer_from_checkpoint
from ..syndata import (
    LanguageRegistry,
    apply_mouth_mask,
    audio_window,
    make_templates,
    render_face,
    synthesize_clip,
)
from ..voiceconv import (
    align_bnf,
    convert_f0,
    interpolate_prosody,
    profile_from_checkpoint,
    speaker_stats,
    synthesizer_from_checkpoint,
    toy_vocoder,
)

MANIFEST_NAME = "manifest.json"


@dataclass
class GenerationRequest:
    text: str
    language_tag: str
    template_id: str
    target_speaker: int
    output_dir: str
    checkpoints: dict[str, str] = field(default_factory=dict)
    swap_source: str | None = None

    def echo(self) -> dict:
        return asdict(self)


def _validate_request(request: GenerationRequest, cfg: Config) -> None:
    if request.language_tag not in cfg.corpus.languages:
        raise ValidationError(
            f"language '{request.language_tag}' not registered "
            f"(config has {cfg.corpus.languages})"
        )
    for name in ("recognizer", "voiceconv", "dubbing"):
        path = request.checkpoints.get(name)
        if not path:
            raise ValidationError(f"request is missing the '{name}' checkpoint path")
        if not Path(path).exists():
            raise ValidationError(f"checkpoint file not found: {path}")
    if request.swap_source is not None:
        if "faceswap" not in request.checkpoints:
            raise ValidationError("swap_source given but no 'faceswap' checkpoint")
        if not Path(request.swap_source).exists():
            raise ValidationError(f"swap source image not found: {request.swap_source}")
        if not Path(request.checkpoints["faceswap"]).exists():
            raise ValidationError(
                f"checkpoint file not found: {request.checkpoints['faceswap']}"
            )


def generate(request: GenerationRequest, cfg: Config) -> dict:
    """Run the full pipeline; returns the manifest dict (also written to disk).

    Stage failures raise PipelineStageError naming the stage; partially
    written outputs are removed.
    """
    _validate_request(request, cfg)
    out_dir = Path(request.output_dir)
    created = not out_dir.exists()
    out_dir.mkdir(parents=True, exist_ok=True)

    def stage(name, fn):
        try:
            return fn()
        except PipelineStageError:
            raise
        except Exception as exc:
            if created:
                shutil.rmtree(out_dir, ignore_errors=True)
            else:
                for leftover in ("frames", "audio.raw", MANIFEST_NAME, "config_echo.yaml"):
                    p = out_dir / leftover
                    if p.is_dir():
                        shutil.rmtree(p, ignore_errors=True)
                    elif p.exists():
                        p.unlink()
            raise PipelineStageError(name, str(exc), request.echo()) from exc

    registry = LanguageRegistry.from_tags(cfg.corpus.languages)
    inventory = registry.combined()
    templates = make_templates(cfg.corpus.templates, cfg.corpus.seed, cfg.corpus.resolution)

    def lookup_template():
        for t in templates:
            if t.template_id == request.template_id:
                return t
        raise ValidationError(f"unknown template '{request.template_id}'")

    template = stage("template-lookup", lookup_template)

    from .text import text_to_phonemes_global

    phonemes = stage("text-to-phonemes", lambda: text_to_phonemes_global(
        request.text, request.language_tag, registry
    ))

    def tts_stub():
        return synthesize_clip(
            template, phonemes, cfg.generation.source_speaker, cfg.generation.seed,
            inventory=inventory, n_speakers=cfg.corpus.speakers,
            frames_per_phoneme=cfg.corpus.frames_per_phoneme,
            audio_frames_per_video_frame=cfg.corpus.audio_frames_per_video_frame,
        )

    source_clip = stage("speech-synthesis", tts_stub)

    def convert():
        recognizer = recognizer_from_checkpoint(load_checkpoint(request.checkpoints["recognizer"]))
        vc_ckpt = load_checkpoint(request.checkpoints["voiceconv"])
        synthesizer = synthesizer_from_checkpoint(vc_ckpt)
        if recognizer.bottleneck_dim != synthesizer.bnf_dim:
            raise ValidationError(
                f"recognizer bottleneck_dim={recognizer.bottleneck_dim} does not match "
                f"voiceconv bnf_dim={synthesizer.bnf_dim}"
            )
        target = profile_from_checkpoint(vc_ckpt, request.target_speaker)
        bnf = align_bnf(recognizer.extract_bnf(source_clip.audio), source_clip.audio.shape[0])
        logf0, uv = interpolate_prosody(source_clip.prosody)
        source_profile = speaker_stats(source_clip.prosody, 0, 1)
        logf0_vc = convert_f0(logf0, source_profile, target)
        return synthesizer.synthesize_spectra(bnf, (logf0_vc, uv), target)

    spectra = stage("voice-conversion", convert)

    r = cfg.corpus.audio_frames_per_video_frame
    t_video = max(2, math.ceil(spectra.shape[0] / r))
    if spectra.shape[0] < t_video * r:  # pad so audio frames == r * video frames
        pad = np.repeat(spectra[-1:], t_video * r - spectra.shape[0], axis=0)
        spectra = np.concatenate([spectra, pad], axis=0)

    def render_template_frames():
        rng = np.random.default_rng(cfg.generation.seed)
        jitter = np.stack(
            [rng.uniform(-2, 2, t_video), rng.uniform(-2, 2, t_video), rng.uniform(-3, 3, t_video)],
            axis=1,
        )
        return np.concatenate([
            render_face(template, cfg.generation.source_aperture, jitter[t])
            for t in range(t_video)
        ], axis=0)

    base_frames = stage("template-render", render_template_frames)

    if request.swap_source is not None:
        def swap():
            model = swap_model_from_checkpoint(load_checkpoint(request.checkpoints["faceswap"]))
            source_img = load_frame_png(request.swap_source)
            return swap_forward(model, source_img, base_frames)

        face_frames = stage("face-swap", swap)
        swap_record = request.swap_source
    else:
        face_frames = base_frames
        swap_record = "none"

    def dub():
        model = dubbing_model_from_checkpoint(load_checkpoint(request.checkpoints["dubbing"]))
        masked = apply_mouth_mask(face_frames, template)
        window = model.audio_window_size
        out = []
        for t in range(t_video):
            ref = face_frames[(t + t_video // 2) % t_video]
            win = audio_window(spectra, t, r, window)
            out.append(dub_frame(model, masked[t], ref, win).numpy()[0])
        return np.stack(out)

    dubbed = stage("dubbing", dub)

    def write_outputs():
        frame_rate = cfg.generation.fps * r
        wave = toy_vocoder(spectra, cfg.generation.sample_rate, frame_rate)
        frame_files = save_frames_dir(dubbed, out_dir / "frames")
        save_waveform(wave, cfg.generation.sample_rate, out_dir / "audio.raw")
        dump_effective_config(cfg, out_dir / "config_echo.yaml")
        manifest = {
            "request": request.echo(),
            "config_hash": config_hash(cfg),
            "phonemes": phonemes,
            "video_frames": int(t_video),
            "audio_frames": int(spectra.shape[0]),
            "audio_frames_per_video_frame": r,
            "sample_rate": cfg.generation.sample_rate,
            "waveform_samples": int(wave.shape[0]),
            "swap": swap_record,
            "files": {
                "frames": [f"frames/{name}" for name in frame_files],
                "waveform": "audio.raw",
                "config_echo": "config_echo.yaml",
            },
        }
        (out_dir / MANIFEST_NAME).write_text(json.dumps(manifest, sort_keys=True, indent=1))
        return manifest

    return stage("write-outputs", write_outputs)


def generate_batch(requests: list[GenerationRequest], cfg: Config) -> list[dict]:
    """Independent per-request generation; one failure does not abort others.

    Returns one result dict per request, in request order.
    """
    results = []
    for i, request in enumerate(requests):
        try:
            manifest = generate(request, cfg)
            results.append({
                "index": i, "status": "ok",
                "output_dir": request.output_dir,
                "manifest": str(Path(request.output_dir) / MANIFEST_NAME),
                "video_frames": manifest["video_frames"],
            })
        except Exception as exc:
            results.append({
                "index": i, "status": "failed",
                "output_dir": request.output_dir,
                "error": str(exc),
                "stage": getattr(exc, "stage", None),
            })
    return results


def load_requests_file(path: str | Path) -> list[GenerationRequest]:
    """Parse a batch request list (YAML or JSON array of request objects)."""
    import yaml

    try:
        data = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as exc:
        raise ValidationError(f"malformed batch file {path}: {exc}") from exc
    if not isinstance(data, list) or not data:
        raise ValidationError(f"batch file {path} must hold a non-empty list of requests")
    requests = []
    for i, entry in enumerate(data):
        if not isinstance(entry, dict):
            raise ValidationError(f"batch entry {i} is not a mapping")
        try:
            requests.append(GenerationRequest(**entry))
        except TypeError as exc:
            raise ValidationError(f"batch entry {i} is malformed: {exc}") from exc
    return requests
