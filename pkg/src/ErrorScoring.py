"""
Word and character error rates with substitution / insertion / deletion breakdowns.

Counts are pooled over all utterances before rates are computed
(micro-average). Alignment never crosses an utterance boundary. Subset
reports align whole utterances and then keep only the operations that touch
the subset; insertions are classified by their hypothesis token.
"""

from collections import OrderedDict
from dataclasses import dataclass
from typing import Callable, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from Alignment import AlignmentCounts, EditKind, EditOp, align
from errors import MissingUtteranceError, TranscriptFormatError
from Lexicon import Lexicon, normalize_word, words_ending_with
from logger import get_logger
from PhoneSet import PhoneSet, default_phone_set
from Utils import read_text_file

logger = get_logger("score")


@dataclass(frozen=True)
class Utterance:
    id: str
    tokens: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.id:
            raise ValueError("utterance id must not be empty")


UtteranceSet = Mapping[str, Utterance]


@dataclass(frozen=True)
class ErrorReport:
    """
    Pooled alignment counts and the rates derived from them.

    Rates are percentages of the reference token count and are None when
    the reference side is empty.
    """
    correct: int = 0
    substitutions: int = 0
    insertions: int = 0
    deletions: int = 0
    oov_words: Tuple[str, ...] = ()

    @property
    def n_ref(self) -> int:
        return self.correct + self.substitutions + self.deletions

    @property
    def defined(self) -> bool:
        return self.n_ref > 0

    def _rate(self, count: int) -> Optional[float]:
        return 100.0 * count / self.n_ref if self.defined else None

    @property
    def error_rate(self) -> Optional[float]:
        return self._rate(self.substitutions + self.insertions + self.deletions)

    @property
    def substitution_rate(self) -> Optional[float]:
        return self._rate(self.substitutions)

    @property
    def insertion_rate(self) -> Optional[float]:
        return self._rate(self.insertions)

    @property
    def deletion_rate(self) -> Optional[float]:
        return self._rate(self.deletions)

    def __add__(self, other: "ErrorReport") -> "ErrorReport":
        return ErrorReport(
            self.correct + other.correct,
            self.substitutions + other.substitutions,
            self.insertions + other.insertions,
            self.deletions + other.deletions,
            tuple(sorted(set(self.oov_words) | set(other.oov_words))),
        )

    @classmethod
    def from_counts(cls, counts: AlignmentCounts, include_insertions: bool = True,
                    oov_words: Iterable[str] = ()) -> "ErrorReport":
        return cls(counts.correct, counts.substitutions,
                   counts.insertions if include_insertions else 0,
                   counts.deletions, tuple(sorted(set(oov_words))))


@dataclass(frozen=True)
class ReportComparison:
    """Baseline minus system: positive values mean the system makes fewer errors."""
    baseline: ErrorReport
    system: ErrorReport

    @property
    def absolute(self) -> Optional[float]:
        if self.baseline.error_rate is None or self.system.error_rate is None:
            return None
        return self.baseline.error_rate - self.system.error_rate

    @property
    def relative(self) -> Optional[float]:
        if self.absolute is None or not self.baseline.error_rate:
            return None
        return 100.0 * self.absolute / self.baseline.error_rate


def parse_transcripts(text: str) -> "OrderedDict[str, Utterance]":
    """One utterance per line: `<utterance-id> <token> <token> ...`."""
    utterances: "OrderedDict[str, Utterance]" = OrderedDict()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        utt_id, tokens = parts[0], tuple(parts[1:])
        if utt_id in utterances:
            raise TranscriptFormatError(f"duplicate utterance id '{utt_id}'", line_no)
        utterances[utt_id] = Utterance(utt_id, tokens)
    return utterances


def read_transcripts(path: str) -> "OrderedDict[str, Utterance]":
    utterances = parse_transcripts(read_text_file(path))
    logger.info(f"Read {len(utterances)} utterances from {path}")
    return utterances


def paired_ids(hyps: UtteranceSet, refs: UtteranceSet) -> List[str]:
    """Reference ids in reference order, after checking both sides cover the same ids."""
    missing_refs = [utt_id for utt_id in hyps if utt_id not in refs]
    missing_hyps = [utt_id for utt_id in refs if utt_id not in hyps]
    if missing_refs or missing_hyps:
        raise MissingUtteranceError(missing_refs, missing_hyps)
    return list(refs)


def word_tokens(utterance: Utterance) -> List[str]:
    words = (normalize_word(token) for token in utterance.tokens)
    return [word for word in words if word]


def char_tokens(utterance: Utterance) -> List[str]:
    return list(" ".join(word_tokens(utterance)))


def _pooled(hyps: UtteranceSet, refs: UtteranceSet,
            tokenize: Callable[[Utterance], Sequence[Hashable]],
            keep: Callable[[EditOp], bool] = lambda op: True) -> AlignmentCounts:
    total = AlignmentCounts()
    for utt_id in paired_ids(hyps, refs):
        path = align(tokenize(hyps[utt_id]), tokenize(refs[utt_id]))
        total = total + AlignmentCounts.from_ops([op for op in path if keep(op)])
    return total


def word_error_report(hyps: UtteranceSet, refs: UtteranceSet, include_insertions: bool = True) -> ErrorReport:
    return ErrorReport.from_counts(_pooled(hyps, refs, word_tokens), include_insertions)


def char_error_report(hyps: UtteranceSet, refs: UtteranceSet, include_insertions: bool = True) -> ErrorReport:
    """Characters of the normalized words joined by single spaces; spaces count as tokens."""
    return ErrorReport.from_counts(_pooled(hyps, refs, char_tokens), include_insertions)


def _op_token(op: EditOp) -> Hashable:
    return op.hyp if op.kind is EditKind.INSERT else op.ref


def subset_word_report(hyps: UtteranceSet, refs: UtteranceSet, lexicon: Lexicon,
                       finals: Iterable[str], include_insertions: bool = True) -> ErrorReport:
    """Word errors restricted to words whose Base pronunciation ends in one of `finals`."""
    subset: FrozenSet[str] = words_ending_with(lexicon, finals)
    oov = set()

    def keep(op: EditOp) -> bool:
        word = _op_token(op)
        if word not in lexicon:
            oov.add(word)
            return False
        return word in subset

    counts = _pooled(hyps, refs, word_tokens, keep)
    if oov:
        logger.warning(f"{len(oov)} word(s) could not be classified (not in lexicon)")
    return ErrorReport.from_counts(counts, include_insertions, oov)


def _phone_tokens(phone_set: PhoneSet) -> Callable[[Utterance], Tuple[str, ...]]:
    def tokenize(utterance: Utterance) -> Tuple[str, ...]:
        return phone_set.normalize_sequence(utterance.tokens)
    return tokenize


def phoneme_class_report(hyp_phones: UtteranceSet, ref_phones: UtteranceSet,
                         member: Callable[[str], bool], phone_set: Optional[PhoneSet] = None,
                         include_insertions: bool = True) -> ErrorReport:
    """Phoneme-level errors restricted to operations whose phoneme satisfies `member`."""
    phone_set = phone_set or default_phone_set()
    counts = _pooled(hyp_phones, ref_phones, _phone_tokens(phone_set),
                     lambda op: member(_op_token(op)))
    return ErrorReport.from_counts(counts, include_insertions)


def vowel_error_report(hyp_phones: UtteranceSet, ref_phones: UtteranceSet,
                       phone_set: Optional[PhoneSet] = None, include_insertions: bool = True) -> ErrorReport:
    phone_set = phone_set or default_phone_set()
    return phoneme_class_report(hyp_phones, ref_phones, phone_set.is_vowel, phone_set, include_insertions)


def consonant_error_report(hyp_phones: UtteranceSet, ref_phones: UtteranceSet,
                           phone_set: Optional[PhoneSet] = None, include_insertions: bool = True) -> ErrorReport:
    phone_set = phone_set or default_phone_set()
    return phoneme_class_report(hyp_phones, ref_phones, lambda p: not phone_set.is_vowel(p),
                                phone_set, include_insertions)


def compare_reports(baseline: ErrorReport, system: ErrorReport) -> ReportComparison:
    return ReportComparison(baseline, system)
