"""Quantitative evaluation: PSNR, SSIM, and sync-error metrics."""
from .image import PSNR_CAP_DB, gaussian_window, psnr, ssim
from .report import EvalReport, evaluate_dirs, evaluate_frames
from .sync_metrics import lse_metrics

__all__ = [
    "PSNR_CAP_DB", "gaussian_window", "psnr", "ssim",
    "EvalReport", "evaluate_dirs", "evaluate_frames", "lse_metrics",
]
