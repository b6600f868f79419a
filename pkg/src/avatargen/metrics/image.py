"""Image quality metrics: peak signal-to-noise ratio and mean structural
similarity with a Gaussian window.

Inputs may be single images ([H,W] or [C,H,W]) or frame stacks ([T,C,H,W]);
statistics are computed per 2-D plane and averaged.
"""
from __future__ import annotations

import numpy as np

from ..errors import ValidationError

PSNR_CAP_DB = 100.0
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5


def _planes(a: np.ndarray) -> np.ndarray:
    """Any supported layout -> [N, H, W] float64."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim == 2:
        return arr[None]
    if arr.ndim == 3:
        return arr
    if arr.ndim == 4:
        return arr.reshape(-1, *arr.shape[2:])
    raise ValidationError(f"unsupported image shape {arr.shape}")


def psnr(a, b, peak: float = 1.0) -> float:
    """10*log10(peak^2 / MSE), capped at 100 dB for identical inputs."""
    x, y = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    if x.shape != y.shape:
        raise ValidationError(f"shape mismatch: {x.shape} vs {y.shape}")
    if peak <= 0:
        raise ValidationError(f"peak must be positive, got {peak}")
    mse = float(np.mean((x - y) ** 2))
    if mse == 0.0:
        return PSNR_CAP_DB
    return min(10.0 * np.log10(peak**2 / mse), PSNR_CAP_DB)


def gaussian_window(size: int, sigma: float) -> np.ndarray:
    half = (size - 1) / 2.0
    g = np.exp(-0.5 * ((np.arange(size) - half) / sigma) ** 2)
    k = np.outer(g, g)
    return k / k.sum()


def _window_stats(plane: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Weighted local means over all fully-contained window positions."""
    size = kernel.shape[0]
    view = np.lib.stride_tricks.sliding_window_view(plane, (size, size))
    return np.tensordot(view, kernel, axes=([2, 3], [0, 1]))


def ssim(a, b, peak: float = 1.0, window: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> float:
    """Mean local SSIM with C1=(0.01*peak)^2, C2=(0.03*peak)^2.

    The window is clipped (to an odd size) for images smaller than 11 px.
    """
    xa, xb = _planes(a), _planes(b)
    if xa.shape != xb.shape:
        raise ValidationError(f"shape mismatch: {np.asarray(a).shape} vs {np.asarray(b).shape}")
    h, w = xa.shape[-2:]
    size = min(window, h, w)
    if size % 2 == 0:
        size -= 1
    if size < 2:
        raise ValidationError("images too small for any SSIM window")
    kernel = gaussian_window(size, sigma)
    c1, c2 = (0.01 * peak) ** 2, (0.03 * peak) ** 2

    values = []
    for pa, pb in zip(xa, xb):
        mu_a = _window_stats(pa, kernel)
        mu_b = _window_stats(pb, kernel)
        var_a = _window_stats(pa * pa, kernel) - mu_a**2
        var_b = _window_stats(pb * pb, kernel) - mu_b**2
        cov = _window_stats(pa * pb, kernel) - mu_a * mu_b
        num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
        den = (mu_a**2 + mu_b**2 + c1) * (var_a + var_b + c2)
        values.append(np.mean(num / den))
    return float(np.mean(values))
