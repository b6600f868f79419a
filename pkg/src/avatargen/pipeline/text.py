"""Deterministic text-to-phoneme stub.

Mapping rule (same for every language tag, applied to that language's own
inventory): lowercase letters map round-robin by alphabet position onto the
language's non-silence speakable symbols; every other character (space,
digits, punctuation, unknown) maps to silence. Identical characters therefore
map to identical ids, and different languages occupy disjoint id ranges once
mapped through a registry.
"""
from __future__ import annotations

from ..errors import ValidationError
from ..syndata import LanguageInventory, LanguageRegistry


def text_to_phonemes(text: str, inventory: LanguageInventory) -> list[int]:
    """Map text into the language's own (local) phoneme ids."""
    if not text:
        raise ValidationError("text must be non-empty")
    speakable = [i for i in inventory.speakable_ids() if i != inventory.silence_id]
    out = []
    for ch in text.lower():
        if "a" <= ch <= "z":
            out.append(speakable[(ord(ch) - ord("a")) % len(speakable)])
        else:
            out.append(inventory.silence_id)
    return out


def text_to_phonemes_global(text: str, language_tag: str,
                            registry: LanguageRegistry) -> list[int]:
    """Map text via the language's inventory into the registry's combined ids."""
    if language_tag not in registry.inventories:
        raise ValidationError(
            f"language '{language_tag}' not registered (have {list(registry.tags)})"
        )
    local = text_to_phonemes(text, registry.inventories[language_tag])
    return registry.to_combined_ids(language_tag, local)
