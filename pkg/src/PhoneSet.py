"""
Phoneme inventory and phonetic categories.

The default inventory is the 39-symbol CMU set, grouped into the eight
categories used by the confusion analysis. Other inventories can be loaded
from a plain-text file with one `SYMBOL<TAB>CATEGORY` entry per line.
"""

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

from errors import PhoneSetFormatError, UnknownPhonemeError
from logger import get_logger
from Utils import read_text_file

logger = get_logger("phoneset")

_STRESS_PATTERN = re.compile(r"^([A-Z]+)([012])$")


class CategoryKind(Enum):
    VOWEL = "Vowel"
    CONSONANT = "Consonant"


class PhonemeCategory(Enum):
    """Phonetic categories, in the order the analysis tables list them"""
    SHORT_VOWEL = "ShortVowel"
    LONG_VOWEL = "LongVowel"
    DIPHTHONG = "Diphthong"
    PLOSIVE = "Plosive"
    AFFRICATE = "Affricate"
    NASAL = "Nasal"
    FRICATIVE = "Fricative"
    APPROXIMANT = "Approximant"

    @property
    def kind(self) -> CategoryKind:
        if self in (PhonemeCategory.SHORT_VOWEL, PhonemeCategory.LONG_VOWEL, PhonemeCategory.DIPHTHONG):
            return CategoryKind.VOWEL
        return CategoryKind.CONSONANT


CMU_39: Tuple[Tuple[str, PhonemeCategory], ...] = (
    ("AE", PhonemeCategory.SHORT_VOWEL),
    ("AH", PhonemeCategory.SHORT_VOWEL),
    ("EH", PhonemeCategory.SHORT_VOWEL),
    ("IH", PhonemeCategory.SHORT_VOWEL),
    ("UH", PhonemeCategory.SHORT_VOWEL),
    ("AA", PhonemeCategory.LONG_VOWEL),
    ("AO", PhonemeCategory.LONG_VOWEL),
    ("ER", PhonemeCategory.LONG_VOWEL),
    ("IY", PhonemeCategory.LONG_VOWEL),
    ("UW", PhonemeCategory.LONG_VOWEL),
    ("AY", PhonemeCategory.DIPHTHONG),
    ("AW", PhonemeCategory.DIPHTHONG),
    ("EY", PhonemeCategory.DIPHTHONG),
    ("OW", PhonemeCategory.DIPHTHONG),
    ("OY", PhonemeCategory.DIPHTHONG),
    ("B", PhonemeCategory.PLOSIVE),
    ("D", PhonemeCategory.PLOSIVE),
    ("G", PhonemeCategory.PLOSIVE),
    ("K", PhonemeCategory.PLOSIVE),
    ("P", PhonemeCategory.PLOSIVE),
    ("T", PhonemeCategory.PLOSIVE),
    ("CH", PhonemeCategory.AFFRICATE),
    ("JH", PhonemeCategory.AFFRICATE),
    ("M", PhonemeCategory.NASAL),
    ("N", PhonemeCategory.NASAL),
    ("NG", PhonemeCategory.NASAL),
    ("DH", PhonemeCategory.FRICATIVE),
    ("F", PhonemeCategory.FRICATIVE),
    ("HH", PhonemeCategory.FRICATIVE),
    ("S", PhonemeCategory.FRICATIVE),
    ("SH", PhonemeCategory.FRICATIVE),
    ("TH", PhonemeCategory.FRICATIVE),
    ("V", PhonemeCategory.FRICATIVE),
    ("Z", PhonemeCategory.FRICATIVE),
    ("ZH", PhonemeCategory.FRICATIVE),
    ("L", PhonemeCategory.APPROXIMANT),
    ("R", PhonemeCategory.APPROXIMANT),
    ("W", PhonemeCategory.APPROXIMANT),
    ("Y", PhonemeCategory.APPROXIMANT),
)


@dataclass(frozen=True)
class PhoneSet:
    """
    Closed phoneme inventory with one category per symbol.

    Immutable after construction, so a single instance can be shared by
    concurrent workers.
    """
    members: Tuple[Tuple[str, PhonemeCategory], ...]
    _index: Dict[str, PhonemeCategory] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index: Dict[str, PhonemeCategory] = {}
        for symbol, category in self.members:
            if symbol in index:
                raise PhoneSetFormatError(f"duplicate phoneme symbol '{symbol}'")
            index[symbol] = category
        object.__setattr__(self, "_index", index)

    def __contains__(self, symbol: object) -> bool:
        return symbol in self._index

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return (symbol for symbol, _ in self.members)

    @property
    def symbols(self) -> Tuple[str, ...]:
        return tuple(symbol for symbol, _ in self.members)

    def category_of(self, symbol: str) -> PhonemeCategory:
        try:
            return self._index[symbol]
        except KeyError:
            raise UnknownPhonemeError(symbol) from None

    def is_vowel(self, symbol: str) -> bool:
        return self.category_of(symbol).kind is CategoryKind.VOWEL

    def members_of(self, category: PhonemeCategory) -> Tuple[str, ...]:
        return tuple(symbol for symbol, cat in self.members if cat is category)

    def vowels(self) -> Tuple[str, ...]:
        return tuple(symbol for symbol, cat in self.members if cat.kind is CategoryKind.VOWEL)

    def consonants(self) -> Tuple[str, ...]:
        return tuple(symbol for symbol, cat in self.members if cat.kind is CategoryKind.CONSONANT)

    def normalize_symbol(self, token: str, line: Optional[int] = None) -> str:
        """
        Uppercase a token, strip a lexical-stress digit and validate it.

        Stress digits are only accepted on vowels.
        """
        symbol = token.strip().upper()
        stressed = _STRESS_PATTERN.match(symbol)
        if stressed:
            symbol = stressed.group(1)
        if symbol not in self._index:
            raise UnknownPhonemeError(token, line)
        if stressed and not self.is_vowel(symbol):
            raise UnknownPhonemeError(token, line, reason="stress mark on consonant")
        return symbol

    def normalize_sequence(self, tokens: Iterable[str], line: Optional[int] = None) -> Tuple[str, ...]:
        return tuple(self.normalize_symbol(token, line) for token in tokens)


def parse_phone_set(text: str) -> PhoneSet:
    """Parse `SYMBOL<TAB>CATEGORY` lines; `#` starts a comment line."""
    categories = {category.value: category for category in PhonemeCategory}
    members: List[Tuple[str, PhonemeCategory]] = []
    seen = set()

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise PhoneSetFormatError(f"expected 'SYMBOL<TAB>CATEGORY', got {raw!r}", line_no)
        symbol, category_name = parts[0].upper(), parts[1]
        if category_name not in categories:
            raise PhoneSetFormatError(f"unknown category '{category_name}'", line_no)
        if symbol in seen:
            raise PhoneSetFormatError(f"duplicate phoneme symbol '{symbol}'", line_no)
        seen.add(symbol)
        members.append((symbol, categories[category_name]))

    if not members:
        raise PhoneSetFormatError("phone set is empty")
    return PhoneSet(tuple(members))


def load_phone_set(path: str) -> PhoneSet:
    phone_set = parse_phone_set(read_text_file(path))
    logger.info(f"Loaded phone set with {len(phone_set)} symbols from {path}")
    return phone_set


@lru_cache(maxsize=1)
def default_phone_set() -> PhoneSet:
    """The compiled-in 39-phoneme CMU inventory."""
    return PhoneSet(CMU_39)


def category_of(symbol: str, phone_set: Optional[PhoneSet] = None) -> PhonemeCategory:
    return (phone_set or default_phone_set()).category_of(symbol)


def is_vowel(symbol: str, phone_set: Optional[PhoneSet] = None) -> bool:
    return (phone_set or default_phone_set()).is_vowel(symbol)
