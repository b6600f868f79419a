"""avatargen: a desk-scale talking-avatar generation stack.

Synthetic corpora with exact lip ground truth, a hybrid CTC-attention phoneme
recognizer, seq2seq voice conversion, identity-injection face swapping,
audio-driven dubbing with per-channel affine feature deformation, quality and
lip-sync metrics, and an end-to-end generation pipeline exposed as a library,
a CLI, and a FastAPI service.
"""

__version__ = "0.1.0"
