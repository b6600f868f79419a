"""Any-to-many voice conversion over bottleneck features."""
from .attention import MolAttention, mol_attention_weights
from .model import Synthesizer
from .prosody import (
    SpeakerProfile,
    convert_f0,
    interpolate_prosody,
    one_hot,
    speaker_stats,
)
from .train import (
    MODULE_ID,
    align_bnf,
    build_synthesizer,
    convert_voice,
    corpus_speaker_profiles,
    profile_from_checkpoint,
    synthesizer_from_checkpoint,
    train_synthesizer,
)
from .vocoder import analyze_waveform, band_frequencies, toy_vocoder

__all__ = [
    "MolAttention", "mol_attention_weights", "Synthesizer",
    "SpeakerProfile", "convert_f0", "interpolate_prosody", "one_hot", "speaker_stats",
    "MODULE_ID", "align_bnf", "build_synthesizer", "convert_voice",
    "corpus_speaker_profiles", "profile_from_checkpoint", "synthesizer_from_checkpoint",
    "train_synthesizer", "analyze_waveform", "band_frequencies", "toy_vocoder",
]
