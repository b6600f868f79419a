"""BNF-to-spectra synthesizer: bottleneck encoder + pitch encoder fused by
element-wise addition, concatenated with the target speaker one-hot, decoded
autoregressively under mixture-of-logistics location-relative attention.
"""
from __future__ import annotations

import numpy as np
import torch
from torch import nn

from ..errors import ValidationError
from ..torchutil import to_tensor
from .attention import MolAttention
from .prosody import SpeakerProfile

LOGF0_CENTER = 4.8  # rough center of the synthetic voices' log-Hz range


class Synthesizer(nn.Module):
    def __init__(
        self,
        bnf_dim: int,
        n_speakers: int,
        encoder_dim: int = 48,
        pitch_channels: int = 16,
        decoder_dim: int = 64,
        n_mixtures: int = 5,
        output_dim: int = 29,
    ):
        super().__init__()
        if encoder_dim % 2:
            raise ValidationError("encoder_dim must be even (bidirectional halves)")
        self.bnf_dim = bnf_dim
        self.n_speakers = n_speakers
        self.output_dim = output_dim

        self.bnf_encoder = nn.GRU(
            bnf_dim, encoder_dim // 2, num_layers=2, batch_first=True, bidirectional=True
        )
        self.pitch_encoder = nn.Sequential(
            nn.Conv1d(2, pitch_channels, 5, padding=2),
            nn.ReLU(),
            nn.Conv1d(pitch_channels, encoder_dim, 5, padding=2),
        )
        ctx_dim = encoder_dim + n_speakers
        self.prenet = nn.Sequential(nn.Linear(output_dim, decoder_dim // 2), nn.ReLU())
        self.attention = MolAttention(decoder_dim, n_mixtures)
        self.decoder_cell = nn.GRUCell(decoder_dim // 2 + ctx_dim, decoder_dim)
        self.out_proj = nn.Linear(decoder_dim + ctx_dim, output_dim)
        self.stop_proj = nn.Linear(decoder_dim, 1)

    def _dtype(self):
        return next(self.parameters()).dtype

    def encode(self, bnf, logf0, uv, target: SpeakerProfile) -> torch.Tensor:
        bnf = to_tensor(bnf, self._dtype())
        logf0 = to_tensor(logf0, self._dtype())
        uv = to_tensor(uv, self._dtype())
        if bnf.ndim != 2 or bnf.shape[1] != self.bnf_dim:
            raise ValidationError(f"expected BNF [T, {self.bnf_dim}], got {tuple(bnf.shape)}")
        if bnf.shape[0] != logf0.shape[0] or bnf.shape[0] != uv.shape[0]:
            raise ValidationError(
                f"frame-count mismatch: bnf {bnf.shape[0]} vs prosody {logf0.shape[0]}"
            )
        emb = to_tensor(target.embedding, self._dtype())
        if emb.shape[0] != self.n_speakers:
            raise ValidationError(
                f"speaker embedding has {emb.shape[0]} entries, model expects {self.n_speakers}"
            )
        content = self.bnf_encoder(bnf[None])[0][0]                      # [T, E]
        pitch_in = torch.stack([logf0 - LOGF0_CENTER, uv])[None]        # [1, 2, T]
        pitch = self.pitch_encoder(pitch_in)[0].transpose(0, 1)         # [T, E]
        fused = content + pitch
        return torch.cat([fused, emb[None].expand(fused.shape[0], -1)], dim=1)

    def _decode_step(self, y_prev, state, position, memory):
        pre = self.prenet(y_prev)
        weights, position = self.attention(state, position, memory.shape[0])
        context = weights @ memory
        state = self.decoder_cell(torch.cat([pre, context])[None], state[None])[0]
        frame = torch.sigmoid(self.out_proj(torch.cat([state, context])))
        stop = torch.sigmoid(self.stop_proj(state))[0]
        return frame, stop, state, position, weights

    def teacher_forced(self, memory: torch.Tensor, targets: torch.Tensor,
                       sample_own_prob: float = 0.0,
                       rng: np.random.Generator | None = None):
        """Decode len(targets) steps feeding gold frames (or, with probability
        ``sample_own_prob`` per step, the model's own previous output)."""
        state = memory.new_zeros(self.decoder_cell.hidden_size)
        position = memory.new_zeros(())
        y_prev = memory.new_zeros(self.output_dim)
        frames, stops = [], []
        for t in range(targets.shape[0]):
            frame, stop, state, position, _ = self._decode_step(y_prev, state, position, memory)
            frames.append(frame)
            stops.append(stop)
            use_own = rng is not None and sample_own_prob > 0 and rng.uniform() < sample_own_prob
            y_prev = frame.detach() if use_own else targets[t]
        return torch.stack(frames), torch.stack(stops)

    @torch.no_grad()
    def synthesize_spectra(self, bnf, prosody: tuple[np.ndarray, np.ndarray],
                           target: SpeakerProfile, max_ratio: int = 3) -> np.ndarray:
        """Autoregressive generation; stops on the stop head, capped at
        ``max_ratio`` times the input length. Deterministic in eval mode."""
        was_training = self.training
        self.eval()
        try:
            logf0, uv = prosody
            memory = self.encode(bnf, logf0, uv, target)
            state = memory.new_zeros(self.decoder_cell.hidden_size)
            position = memory.new_zeros(())
            y_prev = memory.new_zeros(self.output_dim)
            out = []
            max_len = max_ratio * memory.shape[0]
            for _ in range(max_len):
                frame, stop, state, position, _ = self._decode_step(
                    y_prev, state, position, memory
                )
                out.append(frame)
                y_prev = frame
                if stop.item() > 0.5 and len(out) >= 2:
                    break
            return torch.stack(out).cpu().numpy()
        finally:
            self.train(was_training)
