"""
Singing-adapted lexicons.

Alternative pronunciations are added for two habits of sung performance:
dropping a word-final consonant (L1) and holding a vowel (L2). L3 combines
both. Variants are only ever derived from Base pronunciations, so adapting
an adapted lexicon adds nothing new.
"""

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Sequence

from Lexicon import (ORIGIN_ORDER, Lexicon, LexiconEntry, Pronunciation,
                     VariantOrigin)
from logger import get_logger
from PhoneSet import PhoneSet, default_phone_set

logger = get_logger("adapt")

DEFAULT_DROP_FINALS: FrozenSet[str] = frozenset({"D", "T", "DH", "Z"})
DEFAULT_MAX_VOWEL_REPEAT = 2


class AdaptationMode(Enum):
    CONSONANT_DROP = "l1"
    VOWEL_EXTEND = "l2"
    COMBINED = "l3"


@dataclass(frozen=True)
class AdaptationConfig:
    drop_finals: FrozenSet[str] = DEFAULT_DROP_FINALS
    max_vowel_repeat: int = DEFAULT_MAX_VOWEL_REPEAT
    mode: AdaptationMode = AdaptationMode.COMBINED
    cross_compose: bool = True

    def validate(self, phone_set: Optional[PhoneSet] = None) -> "AdaptationConfig":
        phone_set = phone_set or default_phone_set()
        if self.max_vowel_repeat < 1:
            raise ValueError("max_vowel_repeat must be at least 1")
        vowels = sorted(p for p in self.drop_finals if phone_set.is_vowel(p))
        if vowels:
            raise ValueError(f"drop_finals may only contain consonants, got {', '.join(vowels)}")
        return self

    @property
    def drops_consonants(self) -> bool:
        return self.mode in (AdaptationMode.CONSONANT_DROP, AdaptationMode.COMBINED)

    @property
    def extends_vowels(self) -> bool:
        return self.mode in (AdaptationMode.VOWEL_EXTEND, AdaptationMode.COMBINED)


@dataclass(frozen=True)
class AdaptationSummary:
    words: int
    words_touched: int
    prons_before: int
    prons_after: int
    by_origin: Dict[str, int] = field(default_factory=dict)

    @property
    def prons_added(self) -> int:
        return self.prons_after - self.prons_before


def _dedupe(prons: Sequence[Pronunciation]) -> List[Pronunciation]:
    seen = set()
    unique = []
    for pron in prons:
        if pron.phones not in seen:
            seen.add(pron.phones)
            unique.append(pron)
    return unique


def _drop_final(pron: Pronunciation, cfg: AdaptationConfig) -> Optional[Pronunciation]:
    if len(pron) >= 2 and pron.phones[-1] in cfg.drop_finals:
        return Pronunciation(pron.phones[:-1], VariantOrigin.CONSONANT_DROP)
    return None


def _extend(pron: Pronunciation, cfg: AdaptationConfig, phone_set: PhoneSet) -> List[Pronunciation]:
    if cfg.max_vowel_repeat <= 1:
        return []
    variants = []
    for i, phone in enumerate(pron.phones):
        if phone_set.is_vowel(phone):
            held = (phone,) * cfg.max_vowel_repeat
            variants.append(Pronunciation(pron.phones[:i] + held + pron.phones[i + 1:],
                                          VariantOrigin.VOWEL_EXTEND))
    return variants


def drop_final_consonant(entry: LexiconEntry, cfg: AdaptationConfig) -> List[Pronunciation]:
    """Copies of each Base pronunciation with its final drop-set consonant removed."""
    return _dedupe([variant for pron in entry.base_prons
                    for variant in [_drop_final(pron, cfg)] if variant is not None])


def extend_vowels(entry: LexiconEntry, cfg: AdaptationConfig,
                  phone_set: Optional[PhoneSet] = None) -> List[Pronunciation]:
    """One variant per vowel position of each Base pronunciation, that vowel held max_vowel_repeat times."""
    phone_set = phone_set or default_phone_set()
    return _dedupe([variant for pron in entry.base_prons for variant in _extend(pron, cfg, phone_set)])


def adapt_entry(entry: LexiconEntry, cfg: AdaptationConfig,
                phone_set: Optional[PhoneSet] = None) -> LexiconEntry:
    phone_set = phone_set or default_phone_set()
    dropped: List[Pronunciation] = []
    extended: List[Pronunciation] = []

    if cfg.drops_consonants:
        dropped = drop_final_consonant(entry, cfg)
    if cfg.extends_vowels:
        extended = extend_vowels(entry, cfg, phone_set)
        if cfg.mode is AdaptationMode.COMBINED and cfg.cross_compose:
            for pron in dropped:
                extended.extend(_extend(pron, cfg, phone_set))

    prons = _dedupe(list(entry.prons) + dropped + extended)
    prons.sort(key=lambda pron: ORIGIN_ORDER[pron.origin])
    return LexiconEntry(entry.word, tuple(prons))


def adapt_lexicon(lexicon: Lexicon, cfg: Optional[AdaptationConfig] = None) -> Lexicon:
    """Add singing variants to every entry; words and existing pronunciations are kept as they are."""
    cfg = (cfg or AdaptationConfig()).validate(lexicon.phone_set)
    entries = tuple(adapt_entry(entry, cfg, lexicon.phone_set) for entry in lexicon)
    adapted = Lexicon(entries, lexicon.phone_set)
    logger.info(f"Adapted lexicon ({cfg.mode.value}): {lexicon.pron_count()} -> {adapted.pron_count()} pronunciations")
    return adapted


def summarize_adaptation(original: Lexicon, adapted: Lexicon) -> AdaptationSummary:
    touched = sum(
        1 for entry in adapted
        if original.get(entry.word) is None or len(original.get(entry.word).prons) != len(entry.prons)
    )
    before = Counter(pron.origin.value for entry in original for pron in entry.prons)
    after = Counter(pron.origin.value for entry in adapted for pron in entry.prons)
    added = {origin.value: after[origin.value] - before[origin.value] for origin in VariantOrigin}
    return AdaptationSummary(
        words=len(adapted),
        words_touched=touched,
        prons_before=original.pron_count(),
        prons_after=adapted.pron_count(),
        by_origin=added,
    )
