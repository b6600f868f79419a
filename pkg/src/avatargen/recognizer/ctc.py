"""Alignment-marginalized label log-probability via the forward dynamic
program over the blank-augmented label sequence, plus greedy decoding.

Label topology: blanks may be skipped except between repeated labels, so the
minimum representable frame count is ``len(labels) + #repeats``. Shorter
inputs return ``-inf`` (documented sentinel, not an exception).
"""
from __future__ import annotations

import numpy as np
import torch

from ..errors import ValidationError

NEG_INF = float("-inf")
# finite stand-in for impossible DP cells: exp() underflows to exactly 0, so
# results are bit-identical to -inf padding, but logsumexp backward stays NaN-free
_LOG_ZERO = -1e10


def _as_log_post(log_posteriors) -> torch.Tensor:
    lp = log_posteriors
    if not isinstance(lp, torch.Tensor):
        lp = torch.as_tensor(np.asarray(lp), dtype=torch.float64)
    if lp.ndim != 2:
        raise ValidationError(f"log_posteriors must be [T, V], got shape {tuple(lp.shape)}")
    return lp


def min_frames(labels: list[int]) -> int:
    repeats = sum(1 for a, b in zip(labels, labels[1:]) if a == b)
    return len(labels) + repeats


def ctc_log_prob(log_posteriors, labels: list[int], blank: int) -> torch.Tensor:
    """log P(labels | log_posteriors) summed over all alignments.

    Differentiable w.r.t. ``log_posteriors`` when given a torch tensor.
    """
    lp = _as_log_post(log_posteriors)
    t_len, vocab = lp.shape
    if not (0 <= blank < vocab):
        raise ValidationError(f"blank id {blank} outside vocabulary of size {vocab}")
    labels = [int(y) for y in labels]
    for y in labels:
        if not (0 <= y < vocab) or y == blank:
            raise ValidationError(f"label id {y} invalid for vocabulary size {vocab}")

    if t_len < min_frames(labels):
        return torch.tensor(NEG_INF, dtype=lp.dtype)

    if not labels:
        return lp[:, blank].sum()

    ext = [blank]
    for y in labels:
        ext.extend((y, blank))
    s_len = len(ext)
    ext_t = torch.tensor(ext, dtype=torch.long)

    # the skip transition is illegal into blanks and into repeated labels
    skip_ok = torch.tensor(
        [s >= 2 and ext[s] != blank and ext[s] != ext[s - 2] for s in range(s_len)]
    )
    pad_row = lp.new_full((s_len,), _LOG_ZERO)

    alpha = lp.new_full((s_len,), _LOG_ZERO)
    alpha[0] = lp[0, blank]
    alpha[1] = lp[0, ext[1]]
    for t in range(1, t_len):
        stay = alpha
        prev1 = torch.cat([pad_row[:1], alpha[:-1]])
        prev2 = torch.where(skip_ok, torch.cat([pad_row[:2], alpha[:-2]]), pad_row)
        alpha = torch.logsumexp(torch.stack([stay, prev1, prev2]), dim=0) + lp[t, ext_t]
    return torch.logsumexp(alpha[-2:], dim=0)


def ctc_brute_force_log_prob(posteriors: np.ndarray, labels: list[int], blank: int) -> float:
    """Independent oracle: enumerate every alignment string of length T and
    sum the probabilities of those that collapse to ``labels``."""
    post = np.asarray(posteriors, dtype=np.float64)
    t_len, vocab = post.shape
    target = list(labels)
    total = 0.0
    for flat in range(vocab**t_len):
        path, rest = [], flat
        for _ in range(t_len):
            path.append(rest % vocab)
            rest //= vocab
        collapsed = []
        prev = None
        for s in path:
            if s != prev:
                if s != blank:
                    collapsed.append(s)
            prev = s
        if collapsed == target:
            p = 1.0
            for t, s in enumerate(path):
                p *= post[t, s]
            total += p
    return float(np.log(total)) if total > 0 else NEG_INF


def greedy_ctc_decode(log_posteriors, blank: int) -> list[int]:
    """Best-path decode: frame-wise argmax, collapse repeats, drop blanks."""
    lp = _as_log_post(log_posteriors)
    path = lp.argmax(dim=1).tolist()
    out, prev = [], None
    for s in path:
        if s != prev and s != blank:
            out.append(int(s))
        prev = s
    return out
