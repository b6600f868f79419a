"""End-to-end orchestration: text to talking-avatar frames and waveform."""
from ..checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .generate import (
    MANIFEST_NAME,
    GenerationRequest,
    generate,
    generate_batch,
    load_requests_file,
)
from .text import text_to_phonemes, text_to_phonemes_global

__all__ = [
    "Checkpoint", "load_checkpoint", "save_checkpoint",
    "MANIFEST_NAME", "GenerationRequest", "generate", "generate_batch",
    "load_requests_file", "text_to_phonemes", "text_to_phonemes_global",
]
