"""Prosody handling: voiced-gap interpolation, per-speaker log-F0 statistics,
and the linear log-scale pitch transfer between speaker profiles.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from ..syndata import ProsodyTrack


@dataclass(frozen=True)
class SpeakerProfile:
    """Voiced log-F0 statistics plus the one-hot conditioning vector.

    ``theta`` is the population standard deviation. A profile with theta == 0
    (constant pitch) is representable, but using it as a conversion source is
    rejected.
    """

    speaker_id: int
    mu: float
    theta: float
    embedding: np.ndarray

    def __post_init__(self):
        if self.theta < 0:
            raise ValidationError(f"theta must be >= 0, got {self.theta}")
        emb = np.asarray(self.embedding, dtype=np.float64)
        if emb.ndim != 1 or np.count_nonzero(emb) != 1:
            raise ValidationError("embedding must be one-hot")
        object.__setattr__(self, "embedding", emb)


def one_hot(speaker_id: int, n_speakers: int) -> np.ndarray:
    if not (0 <= speaker_id < n_speakers):
        raise ValidationError(f"speaker id {speaker_id} outside [0, {n_speakers})")
    v = np.zeros(n_speakers)
    v[speaker_id] = 1.0
    return v


def interpolate_prosody(track: ProsodyTrack) -> tuple[np.ndarray, np.ndarray]:
    """Fill unvoiced gaps of the log-F0 contour by linear interpolation.

    Leading/trailing unvoiced frames take the nearest voiced value; the UV
    flags pass through unchanged.
    """
    uv = np.asarray(track.uv)
    voiced_idx = np.flatnonzero(uv == 1)
    if voiced_idx.size == 0:
        raise ValidationError("track has no voiced frames to interpolate from")
    logf0 = np.interp(np.arange(len(track)), voiced_idx, track.logf0[voiced_idx])
    return logf0, uv.copy()


def speaker_stats(tracks: list[ProsodyTrack] | ProsodyTrack, speaker_id: int,
                  n_speakers: int) -> SpeakerProfile:
    """Voiced-only mean and population standard deviation of log-F0."""
    if isinstance(tracks, ProsodyTrack):
        tracks = [tracks]
    values = np.concatenate([t.logf0[np.asarray(t.uv) == 1] for t in tracks]) if tracks else np.array([])
    if values.size < 2:
        raise ValidationError(f"need >= 2 voiced frames to estimate statistics, got {values.size}")
    return SpeakerProfile(
        speaker_id=speaker_id,
        mu=float(values.mean()),
        theta=float(values.std(ddof=0)),
        embedding=one_hot(speaker_id, n_speakers),
    )


def convert_f0(logf0_source: np.ndarray, source: SpeakerProfile,
               target: SpeakerProfile) -> np.ndarray:
    """out = (theta_t / theta_s) * (in - mu_s) + mu_t, elementwise."""
    if source.theta == 0:
        raise ValidationError("source profile has zero log-F0 deviation; cannot rescale")
    x = np.asarray(logf0_source, dtype=np.float64)
    return (target.theta / source.theta) * (x - source.mu) + target.mu
