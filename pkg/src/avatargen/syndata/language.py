"""Phoneme inventories per language tag.

Each language owns a small symbol list with a CTC blank at index 0 and a
silence symbol at index 1. A :class:`LanguageRegistry` concatenates several
languages into one combined inventory with a single shared blank, assigning
every language a disjoint id range so multilingual corpora and recognizers
share one output table.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ValidationError

BLANK_SYMBOL = "<blk>"

# built-in toy languages: symbols are suffixed with the tag so combined
# inventories stay collision-free
_BUILTIN_BASES = {
    "en": ["aa", "ee", "ii", "oo", "uu", "mm", "ss", "tt", "kk", "ll"],
    "de": ["ah", "eh", "ie", "oh", "ue", "nn", "rr", "zz", "ch"],
    "fr": ["an", "en", "in", "on", "un", "jj", "vv", "gn"],
}


@dataclass(frozen=True)
class LanguageInventory:
    language_tag: str
    phonemes: tuple[str, ...]
    blank_id: int = 0
    silence_id: int = 1

    def __post_init__(self):
        if len(self.phonemes) < 3:
            raise ValidationError("inventory needs at least 3 symbols")
        if len(set(self.phonemes)) != len(self.phonemes):
            raise ValidationError("inventory symbols must be unique")
        if not (0 <= self.blank_id < len(self.phonemes)):
            raise ValidationError("blank_id must index into the inventory")
        if not (0 <= self.silence_id < len(self.phonemes)) or self.silence_id == self.blank_id:
            raise ValidationError("silence_id must index a non-blank symbol")

    @property
    def size(self) -> int:
        return len(self.phonemes)

    def speakable_ids(self) -> list[int]:
        """Ids that may appear in clip transcripts (everything except blank)."""
        return [i for i in range(self.size) if i != self.blank_id]


def builtin_inventory(tag: str) -> LanguageInventory:
    if tag not in _BUILTIN_BASES:
        raise ValidationError(f"unknown language tag '{tag}' (have {sorted(_BUILTIN_BASES)})")
    symbols = (BLANK_SYMBOL, f"sil.{tag}") + tuple(f"{s}.{tag}" for s in _BUILTIN_BASES[tag])
    return LanguageInventory(tag, symbols, blank_id=0, silence_id=1)


@dataclass(frozen=True)
class LanguageRegistry:
    """Orders languages and exposes the combined inventory.

    Combined layout: index 0 is the shared blank, then each language's
    non-blank symbols in tag order, so per-language id ranges are disjoint.
    """

    tags: tuple[str, ...]
    inventories: dict[str, LanguageInventory] = field(default_factory=dict)

    @staticmethod
    def from_tags(tags: list[str] | tuple[str, ...]) -> "LanguageRegistry":
        if not tags:
            raise ValidationError("registry needs at least one language tag")
        if len(set(tags)) != len(tags):
            raise ValidationError("duplicate language tags in registry")
        return LanguageRegistry(tuple(tags), {t: builtin_inventory(t) for t in tags})

    def combined(self) -> LanguageInventory:
        symbols: list[str] = [BLANK_SYMBOL]
        for tag in self.tags:
            inv = self.inventories[tag]
            symbols.extend(s for i, s in enumerate(inv.phonemes) if i != inv.blank_id)
        return LanguageInventory(
            "+".join(self.tags), tuple(symbols), blank_id=0,
            silence_id=self.silence_id(self.tags[0]),
        )

    def offset(self, tag: str) -> int:
        """Combined-inventory id of the given language's first non-blank symbol."""
        off = 1
        for t in self.tags:
            if t == tag:
                return off
            off += self.inventories[t].size - 1
        raise ValidationError(f"language '{tag}' not in registry {self.tags}")

    def to_combined_ids(self, tag: str, local_ids: list[int]) -> list[int]:
        inv = self.inventories[tag]
        off = self.offset(tag)
        out = []
        for i in local_ids:
            if not (0 <= i < inv.size) or i == inv.blank_id:
                raise ValidationError(f"id {i} not a speakable phoneme of '{tag}'")
            out.append(off + (i if i < inv.blank_id else i - 1))
        return out

    def silence_id(self, tag: str) -> int:
        inv = self.inventories[tag]
        off = self.offset(tag)
        i = inv.silence_id
        return off + (i if i < inv.blank_id else i - 1)

    def id_range(self, tag: str) -> tuple[int, int]:
        """Half-open combined-id range owned by this language."""
        off = self.offset(tag)
        return off, off + self.inventories[tag].size - 1
