"""Deterministic vocoder: band energies to waveform and back.

Band k is a sinusoid at (k + 2) * frame_rate Hz. Those frequencies are exact
DFT bins of one hop, and every sinusoid starts each hop at phase zero, so the
analysis recovers the synthesis amplitudes up to float error.
"""
from __future__ import annotations

import numpy as np

from ..errors import ValidationError

BAND_OFFSET = 2  # first band sits 2 bins above DC


def band_frequencies(n_bands: int, frame_rate: int) -> np.ndarray:
    return (np.arange(n_bands) + BAND_OFFSET) * float(frame_rate)


def _hop(sample_rate: int, frame_rate: int) -> int:
    if sample_rate % frame_rate:
        raise ValidationError(
            f"frame rate {frame_rate} must divide sample rate {sample_rate}"
        )
    hop = sample_rate // frame_rate
    return hop


def toy_vocoder(spectra: np.ndarray, sample_rate: int = 16000,
                frame_rate: int = 100) -> np.ndarray:
    """Sum of band-limited sinusoids weighted by per-frame band energies."""
    spectra = np.asarray(spectra, dtype=np.float64)
    if spectra.ndim != 2:
        raise ValidationError(f"spectra must be [T, bands], got shape {spectra.shape}")
    if not np.all(np.isfinite(spectra)):
        raise ValidationError("spectra must be finite")
    t_frames, n_bands = spectra.shape
    hop = _hop(sample_rate, frame_rate)
    freqs = band_frequencies(n_bands, frame_rate)
    if freqs[-1] >= sample_rate / 2:
        raise ValidationError("highest band exceeds the Nyquist frequency")
    n = t_frames * hop
    t = np.arange(n) / sample_rate
    amps = np.repeat(spectra, hop, axis=0)                 # [n, bands]
    wave = (amps * np.sin(2 * np.pi * freqs[None, :] * t[:, None])).sum(axis=1)
    return wave.astype(np.float32)


def analyze_waveform(wave: np.ndarray, n_bands: int, sample_rate: int = 16000,
                     frame_rate: int = 100) -> np.ndarray:
    """Per-hop DFT amplitude at each band frequency; inverse of toy_vocoder."""
    wave = np.asarray(wave, dtype=np.float64)
    hop = _hop(sample_rate, frame_rate)
    t_frames = len(wave) // hop
    frames = wave[: t_frames * hop].reshape(t_frames, hop)
    spectrum = np.fft.rfft(frames, axis=1)
    bins = np.arange(n_bands) + BAND_OFFSET
    return (2.0 / hop) * np.abs(spectrum[:, bins])
