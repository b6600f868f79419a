"""On-disk formats: lossless 8-bit PNG frames and raw float32 waveforms.

Waveform files carry a one-line ASCII header followed by little-endian
float32 samples:

    AVWAV 1 <sample_rate> <num_samples>\n<raw bytes>
"""
from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .errors import ValidationError

FRAME_PATTERN = "frame_%06d.png"


def frame_to_u8(frame: np.ndarray) -> np.ndarray:
    """[3,H,W] float in [0,1] -> [H,W,3] uint8."""
    arr = np.asarray(frame)
    if arr.ndim == 4:
        if arr.shape[0] != 1:
            raise ValidationError("expected a single frame")
        arr = arr[0]
    if arr.ndim != 3 or arr.shape[0] != 3:
        raise ValidationError(f"expected [3,H,W] frame, got shape {arr.shape}")
    return (np.clip(arr, 0.0, 1.0) * 255.0).round().astype(np.uint8).transpose(1, 2, 0)


def u8_to_frame(img: np.ndarray) -> np.ndarray:
    return (img.astype(np.float32) / 255.0).transpose(2, 0, 1)


def save_frame_png(frame: np.ndarray, path: str | Path) -> None:
    Image.fromarray(frame_to_u8(frame)).save(str(path), format="PNG")


def load_frame_png(path: str | Path) -> np.ndarray:
    """Load a PNG as a [3,H,W] float array in [0,1]."""
    with Image.open(str(path)) as im:
        return u8_to_frame(np.asarray(im.convert("RGB")))


def save_frames_dir(frames: np.ndarray, directory: str | Path) -> list[str]:
    """Write [T,3,H,W] frames as numbered PNGs; returns relative file names."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    names = []
    for t in range(frames.shape[0]):
        name = FRAME_PATTERN % t
        save_frame_png(frames[t], directory / name)
        names.append(name)
    return names


def load_frames_dir(directory: str | Path) -> np.ndarray:
    directory = Path(directory)
    paths = sorted(directory.glob("frame_*.png"))
    if not paths:
        raise ValidationError(f"no frame_*.png files in {directory}")
    return np.stack([load_frame_png(p) for p in paths], axis=0)


def save_waveform(wave: np.ndarray, sample_rate: int, path: str | Path) -> None:
    wave = np.asarray(wave, dtype="<f4").reshape(-1)
    header = f"AVWAV 1 {int(sample_rate)} {wave.size}\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(wave.tobytes())


def load_waveform(path: str | Path) -> tuple[np.ndarray, int]:
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii").split()
        if len(header) != 4 or header[0] != "AVWAV" or header[1] != "1":
            raise ValidationError(f"not an AVWAV file: {path}")
        sample_rate, n = int(header[2]), int(header[3])
        data = np.frombuffer(fh.read(4 * n), dtype="<f4")
        if data.size != n:
            raise ValidationError(f"waveform truncated: expected {n} samples, got {data.size}")
    return data.astype(np.float32), sample_rate
