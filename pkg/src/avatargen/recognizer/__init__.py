"""Hybrid CTC-attention phoneme recognizer and bottleneck feature extractor."""
from .ctc import (
    ctc_brute_force_log_prob,
    ctc_log_prob,
    greedy_ctc_decode,
    min_frames,
)
from .model import HybridLossConfig, Recognizer, normalize_utterance
from .train import (
    MODULE_ID,
    build_recognizer,
    recognizer_from_checkpoint,
    train_recognizer,
)

__all__ = [
    "ctc_brute_force_log_prob", "ctc_log_prob", "greedy_ctc_decode", "min_frames",
    "HybridLossConfig", "Recognizer", "normalize_utterance",
    "MODULE_ID", "build_recognizer", "recognizer_from_checkpoint", "train_recognizer",
]
