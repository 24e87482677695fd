"""
Per-phoneme confusion statistics over aligned utterances.

Attribution rule: matches, substitutions and deletions are credited to the
ground-truth phoneme; insertions are credited to the predicted phoneme,
since their ground-truth side is empty. Every downstream number (confidence
scores, rankings, the category matrix) depends on this rule.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from Alignment import AlignmentPath, EditKind
from PhoneSet import PhoneSet, PhonemeCategory, CategoryKind, default_phone_set

DEFAULT_CONFUSION_SET_SIZE = 3
EPSILON_LABEL = "eps"


@dataclass(frozen=True)
class PhonemeCounts:
    correct: int = 0
    substitutions: int = 0
    insertions: int = 0
    deletions: int = 0

    @property
    def errors(self) -> int:
        return self.substitutions + self.insertions + self.deletions

    @property
    def total(self) -> int:
        return self.correct + self.errors


@dataclass
class PhonemeStats:
    """
    C/S/I/D counters per phoneme type plus (reference, prediction) substitution pairs.

    Merging is pointwise addition, so shards of a corpus can be accumulated
    independently and combined in any order.
    """
    correct: Counter = field(default_factory=Counter)
    substitutions: Counter = field(default_factory=Counter)
    insertions: Counter = field(default_factory=Counter)
    deletions: Counter = field(default_factory=Counter)
    substitution_pairs: Counter = field(default_factory=Counter)

    def copy(self) -> "PhonemeStats":
        return PhonemeStats(Counter(self.correct), Counter(self.substitutions), Counter(self.insertions),
                            Counter(self.deletions), Counter(self.substitution_pairs))

    def add_path(self, path: AlignmentPath, phone_set: Optional[PhoneSet] = None) -> "PhonemeStats":
        """Fold one alignment into these counters in place."""
        phone_set = phone_set or default_phone_set()
        for op in path:
            for token in (op.ref, op.hyp):
                if token is not None:
                    phone_set.category_of(token)

            if op.kind is EditKind.MATCH:
                self.correct[op.ref] += 1
            elif op.kind is EditKind.SUBSTITUTE:
                self.substitutions[op.ref] += 1
                self.substitution_pairs[(op.ref, op.hyp)] += 1
            elif op.kind is EditKind.DELETE:
                self.deletions[op.ref] += 1
            else:
                self.insertions[op.hyp] += 1
        return self

    def merge(self, other: "PhonemeStats") -> "PhonemeStats":
        merged = self.copy()
        merged.correct.update(other.correct)
        merged.substitutions.update(other.substitutions)
        merged.insertions.update(other.insertions)
        merged.deletions.update(other.deletions)
        merged.substitution_pairs.update(other.substitution_pairs)
        return merged

    __add__ = merge

    def counts(self, phoneme: str) -> PhonemeCounts:
        return PhonemeCounts(self.correct[phoneme], self.substitutions[phoneme],
                             self.insertions[phoneme], self.deletions[phoneme])

    def observed(self) -> frozenset:
        return frozenset(
            phoneme
            for counter in (self.correct, self.substitutions, self.insertions, self.deletions)
            for phoneme, count in counter.items() if count > 0
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PhonemeStats):
            return NotImplemented
        # unary + drops zero and negative entries
        return all(
            +getattr(self, name) == +getattr(other, name)
            for name in ("correct", "substitutions", "insertions", "deletions", "substitution_pairs")
        )


@dataclass(frozen=True)
class ConfidenceRow:
    phoneme: str
    category: PhonemeCategory
    counts: PhonemeCounts
    confidence: Optional[float]
    rank: Optional[int]
    confusion_set: Tuple[str, ...]

    @property
    def ranked(self) -> bool:
        return self.rank is not None


@dataclass(frozen=True)
class CategoryConfusionMatrix:
    """
    Rows are ground-truth labels, columns are predictions; both end with `eps`.

    `counts` holds raw S/I/D event totals, `values` the row-normalized shares.
    """
    labels: Tuple[str, ...]
    counts: np.ndarray
    values: np.ndarray

    def cell(self, truth: str, prediction: str) -> float:
        return float(self.values[self.labels.index(truth), self.labels.index(prediction)])

    def row(self, truth: str) -> Dict[str, float]:
        i = self.labels.index(truth)
        return {label: float(self.values[i, j]) for j, label in enumerate(self.labels)}


def accumulate(stats: PhonemeStats, path: AlignmentPath, phone_set: Optional[PhoneSet] = None) -> PhonemeStats:
    """Return new statistics with `path` folded in; `stats` is left untouched."""
    return stats.copy().add_path(path, phone_set)


def merge(a: PhonemeStats, b: PhonemeStats) -> PhonemeStats:
    return a.merge(b)


def confidence(stats: PhonemeStats, phoneme: str) -> Optional[float]:
    """(C - (S + I + D)) / (C + S + I + D); None when the phoneme was never observed."""
    counts = stats.counts(phoneme)
    if counts.total == 0:
        return None
    return (counts.correct - counts.errors) / counts.total


def confusion_set(stats: PhonemeStats, phoneme: str, n: int = DEFAULT_CONFUSION_SET_SIZE) -> Tuple[str, ...]:
    """The n predictions most often substituted for `phoneme`, ties by symbol."""
    candidates = [(hyp, count) for (ref, hyp), count in stats.substitution_pairs.items()
                  if ref == phoneme and count > 0]
    candidates.sort(key=lambda item: (-item[1], item[0]))
    return tuple(hyp for hyp, _ in candidates[:n])


def confidence_table(stats: PhonemeStats, phone_set: Optional[PhoneSet] = None,
                     n: int = DEFAULT_CONFUSION_SET_SIZE) -> List[ConfidenceRow]:
    """
    One row per phone-set member.

    Observed phonemes come first, ranked by descending confidence with ties
    broken by ascending symbol. Unobserved phonemes follow, unranked, in
    phone-set order.
    """
    if n < 1:
        raise ValueError("confusion set size must be at least 1")
    phone_set = phone_set or default_phone_set()

    scored = []
    unobserved = []
    for phoneme in phone_set.symbols:
        value = confidence(stats, phoneme)
        if value is None:
            unobserved.append(phoneme)
        else:
            scored.append((phoneme, value))
    scored.sort(key=lambda item: (-item[1], item[0]))

    rows = []
    for rank, (phoneme, value) in enumerate(scored, start=1):
        rows.append(ConfidenceRow(phoneme, phone_set.category_of(phoneme), stats.counts(phoneme),
                                  value, rank, confusion_set(stats, phoneme, n)))
    for phoneme in unobserved:
        rows.append(ConfidenceRow(phoneme, phone_set.category_of(phoneme), stats.counts(phoneme),
                                  None, None, ()))
    return rows


def category_matrix(stats: PhonemeStats, phone_set: Optional[PhoneSet] = None) -> CategoryConfusionMatrix:
    """
    Aggregate S/I/D events by phonetic category; matches are left out.

    Deletions land in the (category, eps) column, insertions in the
    (eps, category) row. Each non-empty ground-truth row is scaled to sum to 1.
    """
    phone_set = phone_set or default_phone_set()
    labels = tuple(category.value for category in PhonemeCategory) + (EPSILON_LABEL,)
    eps = len(labels) - 1
    position = {category: i for i, category in enumerate(PhonemeCategory)}
    counts = np.zeros((len(labels), len(labels)), dtype=np.float64)

    for (ref, hyp), count in stats.substitution_pairs.items():
        counts[position[phone_set.category_of(ref)], position[phone_set.category_of(hyp)]] += count
    for phoneme, count in stats.deletions.items():
        counts[position[phone_set.category_of(phoneme)], eps] += count
    for phoneme, count in stats.insertions.items():
        counts[eps, position[phone_set.category_of(phoneme)]] += count

    row_sums = counts.sum(axis=1, keepdims=True)
    values = np.divide(counts, row_sums, out=np.zeros_like(counts), where=row_sums > 0)
    return CategoryConfusionMatrix(labels, counts, values)


def insertion_ranking(stats: PhonemeStats, k: int = 5) -> List[Tuple[str, int]]:
    """Phonemes the recognizer inserts most often, ties by symbol."""
    ranked = sorted(((p, c) for p, c in stats.insertions.items() if c > 0), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


def category_confidence(rows: List[ConfidenceRow]) -> Dict[PhonemeCategory, Optional[float]]:
    """Mean confidence per category over its observed phonemes."""
    grouped: Dict[PhonemeCategory, List[float]] = {category: [] for category in PhonemeCategory}
    for row in rows:
        if row.confidence is not None:
            grouped[row.category].append(row.confidence)
    return {category: (float(np.mean(values)) if values else None) for category, values in grouped.items()}


def suggest_drop_finals(rows: List[ConfidenceRow], k: int = 4) -> Tuple[str, ...]:
    """The k lowest-confidence observed consonants, candidates for final-consonant dropping."""
    consonants = [row for row in rows
                  if row.confidence is not None and row.category.kind is CategoryKind.CONSONANT]
    consonants.sort(key=lambda row: (row.confidence, row.phoneme))
    return tuple(row.phoneme for row in consonants[:k])
