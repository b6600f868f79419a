"""Synthetic paired (audio, frames) clips with exact ground-truth alignment.

Audio features are abstract band-energy patterns (29 dims): each phoneme maps
to a fixed two-bump spectral shape, colored per speaker by a band-gain vector.
The mouth aperture track is the generative ground truth used to draw each
frame, so lip-sync behaviour is quantitatively checkable.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import UnknownSpeakerError, ValidationError
from .language import LanguageInventory
from .templates import AvatarTemplate, render_face

FEATURE_DIM = 29  # deepspeech-like feature width


@dataclass(frozen=True)
class ProsodyTrack:
    """Per-frame (log-F0 value, unvoiced/voiced flag) pairs."""

    logf0: np.ndarray
    uv: np.ndarray

    def __post_init__(self):
        logf0 = np.asarray(self.logf0, dtype=np.float64)
        uv = np.asarray(self.uv, dtype=np.int8)
        if logf0.shape != uv.shape or logf0.ndim != 1:
            raise ValidationError("prosody logf0/uv must be 1-D arrays of equal length")
        if not np.all((uv == 0) | (uv == 1)):
            raise ValidationError("uv flags must be 0 or 1")
        object.__setattr__(self, "logf0", logf0)
        object.__setattr__(self, "uv", uv)

    def __len__(self) -> int:
        return len(self.logf0)


@dataclass
class SyntheticClip:
    frames: np.ndarray          # [T, 3, H, W] in [0, 1]
    audio: np.ndarray           # [T * r, FEATURE_DIM]
    phonemes: list[int]
    mouth_aperture: np.ndarray  # [T] in [0, 1]
    prosody: ProsodyTrack
    speaker_id: int
    template_id: str = ""
    language_tag: str = ""

    def __post_init__(self):
        t = self.frames.shape[0]
        if t < 2:
            raise ValidationError(f"clip needs at least 2 frames, got {t}")
        if self.audio.shape[0] % t != 0:
            raise ValidationError(
                f"audio frame count {self.audio.shape[0]} is not a multiple of T={t}"
            )
        if len(self.prosody) != self.audio.shape[0]:
            raise ValidationError("prosody length must equal audio frame count")

    @property
    def audio_rate(self) -> int:
        """Audio frames per video frame (r)."""
        return self.audio.shape[0] // self.frames.shape[0]


@dataclass(frozen=True)
class SpeakerVoice:
    speaker_id: int
    band_gains: np.ndarray   # [FEATURE_DIM] in [0.7, 1.3]
    base_logf0: float        # log-Hz
    vibrato_depth: float
    vibrato_rate: float


def speaker_voice(speaker_id: int, n_speakers: int) -> SpeakerVoice:
    if not (0 <= speaker_id < n_speakers):
        raise UnknownSpeakerError(f"speaker {speaker_id} not registered (have {n_speakers})")
    rng = np.random.default_rng(1_000_003 + speaker_id)
    return SpeakerVoice(
        speaker_id=speaker_id,
        band_gains=rng.uniform(0.7, 1.3, FEATURE_DIM),
        base_logf0=float(np.log(100.0) + 0.5 * rng.uniform()),
        vibrato_depth=float(0.03 + 0.04 * rng.uniform()),
        vibrato_rate=float(0.03 + 0.05 * rng.uniform()),
    )


def silence_ids(inventory: LanguageInventory) -> set[int]:
    return {i for i, s in enumerate(inventory.phonemes) if s.startswith("sil")}


def phoneme_pattern(phoneme_id: int, dim: int = FEATURE_DIM, silent: bool = False) -> np.ndarray:
    """Fixed band-energy shape for one phoneme: quiet floor plus two bumps."""
    pattern = np.full(dim, 0.02)
    if silent:
        return pattern
    rng = np.random.default_rng(7_919 * (phoneme_id + 1))
    for amp, width in ((0.8, 1.5), (0.45, 2.5)):
        center = rng.integers(1, dim - 1)
        idx = np.arange(dim)
        pattern += amp * np.exp(-0.5 * ((idx - center) / width) ** 2)
    return np.clip(pattern, 0.0, 1.0)


def aperture_target(phoneme_id: int, silent: bool) -> float:
    if silent:
        return 0.0
    return 0.25 + 0.75 * ((phoneme_id * 37 + 11) % 16) / 15.0


def synthesize_clip(
    template: AvatarTemplate,
    phonemes: list[int],
    speaker_id: int,
    seed: int,
    *,
    inventory: LanguageInventory,
    n_speakers: int,
    frames_per_phoneme: int = 3,
    audio_frames_per_video_frame: int = 4,
) -> SyntheticClip:
    """Deterministic clip for (template, phonemes, speaker, seed)."""
    if not phonemes:
        raise ValidationError("phoneme sequence must be non-empty")
    for p in phonemes:
        if not (0 <= p < inventory.size) or p == inventory.blank_id:
            raise ValidationError(f"phoneme id {p} invalid for inventory '{inventory.language_tag}'")
    voice = speaker_voice(speaker_id, n_speakers)
    sil = silence_ids(inventory)
    r = audio_frames_per_video_frame
    t_video = len(phonemes) * frames_per_phoneme
    if t_video < 2:
        raise ValidationError("clip too short: need >= 2 video frames")
    t_audio = t_video * r
    rng = np.random.default_rng(seed)

    # mouth aperture: exponential tracking of the per-phoneme target
    targets = np.array(
        [aperture_target(p, p in sil) for p in phonemes for _ in range(frames_per_phoneme)]
    )
    aperture = np.empty(t_video)
    prev = 0.0
    for t in range(t_video):
        prev = prev + 0.5 * (targets[t] - prev)
        aperture[t] = prev

    # audio: per-phoneme pattern, speaker-colored, with a slow seeded wobble
    phase = rng.uniform(0.0, 2 * np.pi)
    audio = np.empty((t_audio, FEATURE_DIM), dtype=np.float64)
    for ta in range(t_audio):
        p = phonemes[ta // (r * frames_per_phoneme)]
        wobble = 1.0 + 0.05 * np.sin(2 * np.pi * ta / 9.0 + phase)
        audio[ta] = phoneme_pattern(p, silent=p in sil) * voice.band_gains * wobble
    audio = np.clip(audio, 0.0, 1.0)

    # prosody at the audio frame rate; voiced iff non-silence
    uv = np.array([0 if phonemes[ta // (r * frames_per_phoneme)] in sil else 1
                   for ta in range(t_audio)], dtype=np.int8)
    logf0 = np.zeros(t_audio)
    for ta in range(t_audio):
        p = phonemes[ta // (r * frames_per_phoneme)]
        if uv[ta]:
            logf0[ta] = (
                voice.base_logf0
                + 0.2 * ((p * 13) % 7) / 6.0
                + voice.vibrato_depth * np.sin(2 * np.pi * voice.vibrato_rate * ta + phase)
            )

    # frames rendered from the ground-truth aperture with small pose jitter
    jit = np.stack(
        [rng.uniform(-2, 2, t_video), rng.uniform(-2, 2, t_video), rng.uniform(-3, 3, t_video)],
        axis=1,
    )
    frames = np.concatenate(
        [render_face(template, float(aperture[t]), jit[t]) for t in range(t_video)], axis=0
    )

    return SyntheticClip(
        frames=frames.astype(np.float32),
        audio=audio.astype(np.float32),
        phonemes=list(phonemes),
        mouth_aperture=aperture,
        prosody=ProsodyTrack(logf0, uv),
        speaker_id=speaker_id,
        template_id=template.template_id,
        language_tag=inventory.language_tag,
    )


def audio_window(audio: np.ndarray, frame_idx: int, audio_rate: int, window: int) -> np.ndarray:
    """Audio feature window centered on a video frame, edge-padded."""
    center = frame_idx * audio_rate + audio_rate // 2
    idx = np.clip(np.arange(center - window // 2, center - window // 2 + window),
                  0, audio.shape[0] - 1)
    return audio[idx]
