"""Hybrid CTC-attention phoneme recognizer.

Architecture: pooled conv prenet (time downsample 2) -> BiLSTM encoder ->
linear bottleneck projection (the BNF layer) -> CTC head over the inventory,
plus an autoregressive decoder with additive content attention for the
attention branch of the objective.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import torch
from torch import nn

from ..errors import ValidationError
from ..torchutil import to_tensor
from .ctc import ctc_log_prob

TIME_DOWNSAMPLE = 2


@dataclass(frozen=True)
class HybridLossConfig:
    """CTC weight of the joint objective; 0 = attention only, 1 = CTC only."""

    ctc_weight: float = 0.3

    def __post_init__(self):
        if not (0.0 <= self.ctc_weight <= 1.0):
            raise ValidationError(f"ctc_weight must lie in [0, 1], got {self.ctc_weight}")


def normalize_utterance(x):
    """Utterance-level mean-variance normalization, per feature dimension.

    Variance is clamped below by 1e-8 so constant dimensions map to zeros.
    Accepts and returns either a numpy array or a torch tensor.
    """
    if isinstance(x, torch.Tensor):
        if x.ndim != 2 or x.shape[0] < 1:
            raise ValidationError(f"expected [T, F] with T >= 1, got {tuple(x.shape)}")
        mean = x.mean(dim=0, keepdim=True)
        var = x.var(dim=0, unbiased=False, keepdim=True).clamp_min(1e-8)
        return (x - mean) / var.sqrt()
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1:
        raise ValidationError(f"expected [T, F] with T >= 1, got {arr.shape}")
    mean = arr.mean(axis=0, keepdims=True)
    var = np.maximum(arr.var(axis=0, keepdims=True), 1e-8)
    return (arr - mean) / np.sqrt(var)


class Recognizer(nn.Module):
    def __init__(
        self,
        input_dim: int,
        inventory_size: int,
        blank_id: int,
        prenet_channels: int = 8,
        hidden_dim: int = 48,
        bottleneck_dim: int = 32,
        decoder_dim: int = 48,
        attention_dim: int = 32,
    ):
        super().__init__()
        self.input_dim = input_dim
        self.inventory_size = inventory_size
        self.blank_id = blank_id
        self.bottleneck_dim = bottleneck_dim
        self.eos_id = inventory_size        # decoder-only symbol
        self.bos_id = inventory_size + 1    # decoder-only input symbol

        self.prenet = nn.Sequential(
            nn.Conv2d(1, prenet_channels, 3, padding=1),
            nn.ReLU(),
            nn.Conv2d(prenet_channels, prenet_channels, 3, padding=1),
            nn.ReLU(),
            nn.MaxPool2d(2, ceil_mode=True),
        )
        freq_out = math.ceil(input_dim / 2)
        self.encoder = nn.LSTM(
            prenet_channels * freq_out, hidden_dim, batch_first=True, bidirectional=True
        )
        self.bottleneck = nn.Linear(2 * hidden_dim, bottleneck_dim)
        self.ctc_head = nn.Linear(bottleneck_dim, inventory_size)

        self.embed = nn.Embedding(inventory_size + 2, decoder_dim)
        self.att_query = nn.Linear(decoder_dim, attention_dim, bias=False)
        self.att_key = nn.Linear(bottleneck_dim, attention_dim, bias=False)
        self.att_score = nn.Linear(attention_dim, 1, bias=False)
        self.decoder_cell = nn.GRUCell(decoder_dim + bottleneck_dim, decoder_dim)
        self.out_proj = nn.Linear(decoder_dim, inventory_size + 1)

    # -- encoder ---------------------------------------------------------

    def encode(self, x: torch.Tensor) -> torch.Tensor:
        """[T, F] -> bottleneck features [ceil(T/2), bottleneck_dim]."""
        if x.ndim != 2 or x.shape[1] != self.input_dim:
            raise ValidationError(
                f"expected [T, {self.input_dim}] features, got {tuple(x.shape)}"
            )
        h = self.prenet(x[None, None])                     # [1, C, T', F']
        h = h.permute(0, 2, 1, 3).flatten(2)               # [1, T', C*F']
        h, _ = self.encoder(h)
        return self.bottleneck(h)[0]                       # [T', bottleneck]

    def ctc_log_posteriors(self, encoder_out: torch.Tensor) -> torch.Tensor:
        return torch.log_softmax(self.ctc_head(encoder_out), dim=-1)

    # -- attention decoder -------------------------------------------------

    def _decoder_step(self, y_prev: int, state: torch.Tensor, keys, encoder_out):
        query = self.att_query(state)                      # [A]
        scores = self.att_score(torch.tanh(keys + query)).squeeze(-1)
        weights = torch.softmax(scores, dim=0)
        context = weights @ encoder_out
        emb = self.embed(torch.tensor(y_prev))
        state = self.decoder_cell(torch.cat([emb, context])[None], state[None])[0]
        log_probs = torch.log_softmax(self.out_proj(state), dim=-1)
        return log_probs, state

    def attention_log_prob(self, encoder_out: torch.Tensor, labels: list[int]) -> torch.Tensor:
        """Teacher-forced sum of per-step gold log-probabilities.

        ``labels`` must be terminated by the end-of-sequence id.
        """
        if not labels:
            raise ValidationError("labels must be non-empty")
        if labels[-1] != self.eos_id:
            raise ValidationError("labels must be terminated by the end-of-sequence symbol")
        for y in labels[:-1]:
            if not (0 <= y < self.inventory_size):
                raise ValidationError(f"label id {y} outside inventory of size {self.inventory_size}")
        keys = self.att_key(encoder_out)
        state = encoder_out.new_zeros(self.decoder_cell.hidden_size)
        total = encoder_out.new_zeros(())
        y_prev = self.bos_id
        for y in labels:
            log_probs, state = self._decoder_step(y_prev, state, keys, encoder_out)
            total = total + log_probs[y]
            y_prev = y
        return total

    # -- joint objective ---------------------------------------------------

    def hybrid_loss(self, x, labels: list[int], cfg: HybridLossConfig) -> torch.Tensor:
        """-(lam * log P_ctc + (1 - lam) * log P_att), for minimization."""
        x = normalize_utterance(to_tensor(x, self._dtype()))
        encoder_out = self.encode(x)
        lam = cfg.ctc_weight
        zero = encoder_out.new_zeros(())
        ctc_lp = zero
        att_lp = zero
        if lam > 0.0:
            ctc_lp = ctc_log_prob(self.ctc_log_posteriors(encoder_out), labels, self.blank_id)
        if lam < 1.0:
            att_lp = self.attention_log_prob(encoder_out, list(labels) + [self.eos_id])
        return -(lam * ctc_lp + (1.0 - lam) * att_lp)

    def _dtype(self):
        return next(self.parameters()).dtype

    # -- inference ----------------------------------------------------------

    @torch.no_grad()
    def extract_bnf(self, x) -> np.ndarray:
        """Frame-synchronous bottleneck features [ceil(T/2), bottleneck_dim]."""
        arr = np.asarray(x)
        if arr.size == 0 or arr.ndim != 2:
            raise ValidationError("input utterance must be a non-empty [T, F] array")
        was_training = self.training
        self.eval()
        try:
            xt = normalize_utterance(to_tensor(arr, self._dtype()))
            return self.encode(xt).cpu().numpy()
        finally:
            self.train(was_training)

    @torch.no_grad()
    def recognize_greedy(self, x) -> list[int]:
        from .ctc import greedy_ctc_decode

        xt = normalize_utterance(to_tensor(np.asarray(x), self._dtype()))
        return greedy_ctc_decode(self.ctc_log_posteriors(self.encode(xt)), self.blank_id)
