"""
Pronunciation lexicon: CMU-dict parsing, serialization, lookup and phonemization.

A Lexicon is a plain data structure standing in for the L transducer of a
decoding graph. Word transcripts are turned into phoneme sequences by direct
lookup.
"""

import re
import string
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from errors import LexiconParseError, OutOfVocabularyError, UnknownPhonemeError
from logger import get_logger
from PhoneSet import PhoneSet, default_phone_set
from Utils import read_text_file

logger = get_logger("lexicon")

_ALTERNATE_PATTERN = re.compile(r"^(.+)\((\d+)\)$")
_TRAILING_COMMENT = re.compile(r"\s+(#|;;).*$")
_VARIANT_TAG = re.compile(r";;\s*variant=(\w+)")
_WORD_PUNCTUATION = string.punctuation


class VariantOrigin(Enum):
    """Where a pronunciation came from"""
    BASE = "Base"
    CONSONANT_DROP = "ConsonantDrop"
    VOWEL_EXTEND = "VowelExtend"


# Canonical output order of pronunciations within an entry
ORIGIN_ORDER = {
    VariantOrigin.BASE: 0,
    VariantOrigin.CONSONANT_DROP: 1,
    VariantOrigin.VOWEL_EXTEND: 2,
}


class OovPolicy(Enum):
    STRICT = "strict"
    SKIP = "skip"


class PronunciationPolicy(Enum):
    """Which pronunciation phonemize picks for a word"""
    FIRST = "first"
    SHORTEST = "shortest"


@dataclass(frozen=True)
class Pronunciation:
    phones: Tuple[str, ...]
    origin: VariantOrigin = VariantOrigin.BASE

    def __post_init__(self):
        if not self.phones:
            raise ValueError("a pronunciation needs at least one phoneme")

    def __len__(self) -> int:
        return len(self.phones)

    def __str__(self) -> str:
        return " ".join(self.phones)


@dataclass(frozen=True)
class LexiconEntry:
    word: str
    prons: Tuple[Pronunciation, ...]

    def __post_init__(self):
        if not self.prons:
            raise ValueError(f"entry '{self.word}' has no pronunciations")
        if self.prons[0].origin is not VariantOrigin.BASE:
            raise ValueError(f"first pronunciation of '{self.word}' must be Base")
        sequences = [pron.phones for pron in self.prons]
        if len(set(sequences)) != len(sequences):
            raise ValueError(f"entry '{self.word}' has duplicate pronunciations")

    @property
    def base(self) -> Pronunciation:
        return self.prons[0]

    @property
    def base_prons(self) -> Tuple[Pronunciation, ...]:
        return tuple(pron for pron in self.prons if pron.origin is VariantOrigin.BASE)


@dataclass(frozen=True)
class PhonemizedUtterance:
    """Phoneme sequence plus, for each phoneme, the index of the word it came from"""
    phones: Tuple[str, ...]
    word_index: Tuple[int, ...]
    oov_words: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Lexicon:
    """Word-keyed, insertion-ordered collection of entries validated against a phone set"""
    entries: Tuple[LexiconEntry, ...] = ()
    phone_set: PhoneSet = field(default_factory=default_phone_set)
    _index: Dict[str, LexiconEntry] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index: Dict[str, LexiconEntry] = {}
        for entry in self.entries:
            if entry.word in index:
                raise ValueError(f"duplicate lexicon word '{entry.word}'")
            for pron in entry.prons:
                for phone in pron.phones:
                    if phone not in self.phone_set:
                        raise UnknownPhonemeError(phone)
            index[entry.word] = entry
        object.__setattr__(self, "_index", index)

    def __contains__(self, word: object) -> bool:
        return word in self._index

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[LexiconEntry]:
        return iter(self.entries)

    @property
    def words(self) -> Tuple[str, ...]:
        return tuple(entry.word for entry in self.entries)

    def get(self, word: str) -> Optional[LexiconEntry]:
        return self._index.get(word)

    def pron_count(self) -> int:
        return sum(len(entry.prons) for entry in self.entries)


def normalize_word(token: str) -> str:
    """Uppercase and strip surrounding punctuation; internal apostrophes survive."""
    return token.strip().strip(_WORD_PUNCTUATION).upper()


def normalize_text(text: str) -> List[str]:
    """Normalize every whitespace-separated token, dropping tokens that vanish."""
    words = (normalize_word(token) for token in text.split())
    return [word for word in words if word]


def parse_lexicon(text: str, phone_set: Optional[PhoneSet] = None) -> Lexicon:
    """
    Parse CMU-dictionary text.

    `WORD(k)` alternates and repeated keys merge into the entry for WORD in
    file order. Stress digits are stripped. A trailing `;; variant=<Tag>`
    comment restores the variant origin written by serialize_lexicon.
    """
    phone_set = phone_set or default_phone_set()
    origins = {origin.value: origin for origin in VariantOrigin}
    prons_by_word: Dict[str, List[Pronunciation]] = {}
    first_line: Dict[str, int] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(";;;"):
            continue

        origin = VariantOrigin.BASE
        tag = _VARIANT_TAG.search(line)
        if tag:
            if tag.group(1) not in origins:
                raise LexiconParseError(f"unknown variant tag '{tag.group(1)}'", line_no)
            origin = origins[tag.group(1)]
        line = _TRAILING_COMMENT.sub("", line)

        parts = line.split()
        if len(parts) < 2:
            raise LexiconParseError(f"expected 'WORD  PH1 PH2 ...', got {raw.strip()!r}", line_no)

        head = parts[0]
        alternate = _ALTERNATE_PATTERN.match(head)
        if alternate:
            head = alternate.group(1)
        word = normalize_word(head)
        if not word:
            raise LexiconParseError(f"word '{parts[0]}' is empty after normalization", line_no)

        try:
            phones = phone_set.normalize_sequence(parts[1:], line_no)
        except UnknownPhonemeError as e:
            raise UnknownPhonemeError(e.symbol, line_no, reason=f"unknown phoneme in '{word}':") from None

        prons = prons_by_word.setdefault(word, [])
        first_line.setdefault(word, line_no)
        if not prons and origin is not VariantOrigin.BASE:
            raise LexiconParseError(f"first pronunciation of '{word}' must be Base", line_no)
        if any(existing.phones == phones for existing in prons):
            logger.debug(f"line {line_no}: duplicate pronunciation for '{word}' ignored")
            continue
        prons.append(Pronunciation(phones, origin))

    entries = tuple(LexiconEntry(word, tuple(prons)) for word, prons in prons_by_word.items())
    lexicon = Lexicon(entries, phone_set)
    logger.info(f"Parsed lexicon: {len(lexicon)} words, {lexicon.pron_count()} pronunciations")
    return lexicon


def serialize_lexicon(lexicon: Lexicon, tag_variants: bool = False) -> str:
    """Emit CMU-dictionary text; the k-th pronunciation of WORD is written as `WORD(k)`."""
    lines = []
    for entry in lexicon:
        for position, pron in enumerate(entry.prons, start=1):
            head = entry.word if position == 1 else f"{entry.word}({position})"
            line = f"{head}  {pron}"
            if tag_variants:
                line += f"  ;; variant={pron.origin.value}"
            lines.append(line)
    return "".join(line + "\n" for line in lines)


def read_lexicon(path: str, phone_set: Optional[PhoneSet] = None) -> Lexicon:
    return parse_lexicon(read_text_file(path), phone_set)


def _choose(entry: LexiconEntry, policy: PronunciationPolicy) -> Pronunciation:
    if policy is PronunciationPolicy.SHORTEST:
        return min(entry.base_prons, key=len)
    return entry.base


def phonemize(words: Sequence[str], lexicon: Lexicon,
              oov_policy: OovPolicy = OovPolicy.STRICT,
              pron_policy: PronunciationPolicy = PronunciationPolicy.FIRST) -> PhonemizedUtterance:
    """
    Concatenate one pronunciation per word.

    Word liaisons are not merged: `DREAM MAKER` yields `... M M ...`.
    """
    phones: List[str] = []
    word_index: List[int] = []
    oov: List[str] = []

    for position, token in enumerate(words):
        word = normalize_word(token)
        entry = lexicon.get(word)
        if entry is None:
            oov.append(word or token)
            continue
        pron = _choose(entry, pron_policy)
        phones.extend(pron.phones)
        word_index.extend([position] * len(pron))

    if oov and oov_policy is OovPolicy.STRICT:
        raise OutOfVocabularyError(oov)
    return PhonemizedUtterance(tuple(phones), tuple(word_index), tuple(oov))


def words_ending_with(lexicon: Lexicon, finals: Iterable[str]) -> FrozenSet[str]:
    """Words whose Base pronunciation ends in one of `finals`."""
    finals = frozenset(finals)
    if not finals:
        return frozenset()
    return frozenset(entry.word for entry in lexicon if entry.base.phones[-1] in finals)
