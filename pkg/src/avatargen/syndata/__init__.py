"""Procedural generators for all training and evaluation data."""
from .clips import (
    FEATURE_DIM,
    ProsodyTrack,
    SpeakerVoice,
    SyntheticClip,
    aperture_target,
    audio_window,
    phoneme_pattern,
    silence_ids,
    speaker_voice,
    synthesize_clip,
)
from .corpus import Corpus, export_corpus, make_corpus
from .language import (
    BLANK_SYMBOL,
    LanguageInventory,
    LanguageRegistry,
    builtin_inventory,
)
from .templates import (
    AvatarTemplate,
    apply_mouth_mask,
    make_templates,
    mouth_region,
    mouth_region_sum,
    render_face,
)

__all__ = [
    "FEATURE_DIM", "ProsodyTrack", "SpeakerVoice", "SyntheticClip",
    "aperture_target", "audio_window", "phoneme_pattern", "silence_ids",
    "speaker_voice", "synthesize_clip", "Corpus", "export_corpus", "make_corpus",
    "BLANK_SYMBOL", "LanguageInventory", "LanguageRegistry", "builtin_inventory",
    "AvatarTemplate", "apply_mouth_mask", "make_templates", "mouth_region",
    "mouth_region_sum", "render_face",
]
