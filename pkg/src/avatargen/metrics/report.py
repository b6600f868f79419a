"""Evaluation reports: PSNR/SSIM against a reference plus sync metrics,
emitted as deterministic JSON."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..dubbing.sync import SyncScorer
from ..errors import ValidationError
from ..fileio import load_frames_dir
from .image import psnr, ssim
from .sync_metrics import lse_metrics


@dataclass
class EvalReport:
    psnr_db: float
    ssim: float
    lse_d: float
    lse_c: float
    per_frame_psnr: list[float]
    per_frame_ssim: list[float]
    frames: int
    config_echo: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=1)


def evaluate_frames(generated: np.ndarray, reference: np.ndarray, audio: np.ndarray,
                    scorer: SyncScorer, config_echo: dict | None = None) -> EvalReport:
    generated = np.asarray(generated)
    reference = np.asarray(reference)
    if generated.shape != reference.shape:
        raise ValidationError(
            f"frame count/shape mismatch: generated {generated.shape} "
            f"vs reference {reference.shape}"
        )
    per_psnr = [psnr(g, r) for g, r in zip(generated, reference)]
    per_ssim = [ssim(g, r) for g, r in zip(generated, reference)]
    lse_d, lse_c = lse_metrics(generated, audio, scorer)
    return EvalReport(
        psnr_db=psnr(generated, reference),
        ssim=float(np.mean(per_ssim)),
        lse_d=lse_d,
        lse_c=lse_c,
        per_frame_psnr=per_psnr,
        per_frame_ssim=per_ssim,
        frames=int(generated.shape[0]),
        config_echo=config_echo or {},
    )


def evaluate_dirs(generated_dir: str | Path, reference_dir: str | Path,
                  audio: np.ndarray, scorer: SyncScorer,
                  config_echo: dict | None = None) -> EvalReport:
    return evaluate_frames(
        load_frames_dir(generated_dir), load_frames_dir(reference_dir),
        audio, scorer, config_echo,
    )
