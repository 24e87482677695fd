import random
from collections import Counter

import numpy as np
import pytest

from Alignment import align
from ConfusionAnalysis import (EPSILON_LABEL, PhonemeStats, accumulate, category_confidence, category_matrix,
                               confidence, confidence_table, confusion_set, insertion_ranking, merge,
                               suggest_drop_finals)
from errors import UnknownPhonemeError
from PhoneSet import PhonemeCategory


def stats_from_pairs(pairs, phone_set=None):
    stats = PhonemeStats()
    for hyp, ref in pairs:
        stats.add_path(align(hyp, ref), phone_set)
    return stats


def random_corpus(rng, phone_set, size, max_len=8):
    symbols = phone_set.symbols
    corpus = []
    for _ in range(size):
        ref = [rng.choice(symbols) for _ in range(rng.randint(0, max_len))]
        hyp = [rng.choice(symbols) if rng.random() < 0.3 else p for p in ref if rng.random() > 0.1]
        if rng.random() < 0.3:
            hyp.insert(rng.randint(0, len(hyp)), rng.choice(symbols))
        corpus.append((hyp, ref))
    return corpus


def test_attribution_rule():
    stats = stats_from_pairs([(["EH", "N", "AY"], ["AE", "N", "D", "AY"]), (["HH", "AY"], ["AY"])])
    assert stats.substitutions == Counter({"AE": 1})
    assert stats.substitution_pairs == Counter({("AE", "EH"): 1})
    assert stats.deletions == Counter({"D": 1})
    assert stats.insertions == Counter({"HH": 1})
    assert stats.correct == Counter({"N": 1, "AY": 2})
    assert "EH" not in stats.observed()


def test_confidence_anchors():
    assert confidence(PhonemeStats(correct=Counter({"AE": 10})), "AE") == 1.0
    zero_match = PhonemeStats(substitutions=Counter({"AE": 2}), insertions=Counter({"AE": 1}),
                              deletions=Counter({"AE": 3}))
    assert confidence(zero_match, "AE") == -1.0
    mixed = PhonemeStats(correct=Counter({"AE": 3}), substitutions=Counter({"AE": 1}),
                         insertions=Counter({"AE": 1}), deletions=Counter({"AE": 1}))
    assert confidence(mixed, "AE") == 0.0
    assert confidence(mixed, "ZH") is None


def test_confidence_bounds_on_random_stats():
    rng = random.Random(7)
    for _ in range(500):
        counts = [rng.randint(0, 20) for _ in range(4)]
        stats = PhonemeStats(Counter({"T": counts[0]}), Counter({"T": counts[1]}),
                             Counter({"T": counts[2]}), Counter({"T": counts[3]}))
        value = confidence(stats, "T")
        if sum(counts) == 0:
            assert value is None
        else:
            assert -1.0 <= value <= 1.0


def test_confusion_set_sorted_and_truncated():
    stats = PhonemeStats(substitution_pairs=Counter({("AE", "AH"): 5, ("AE", "EH"): 3, ("AE", "AA"): 1}))
    assert confusion_set(stats, "AE", 2) == ("AH", "EH")
    assert confusion_set(stats, "AE") == ("AH", "EH", "AA")
    assert confusion_set(stats, "IY") == ()


def test_confusion_set_ties_by_symbol():
    stats = PhonemeStats(substitution_pairs=Counter({("AE", "EH"): 2, ("AE", "AH"): 2, ("AE", "AA"): 2}))
    assert confusion_set(stats, "AE", 2) == ("AA", "AH")


def test_table_ranks_observed_and_lists_unobserved_last(phone_set):
    stats = stats_from_pairs([(["EH", "N", "AY"], ["AE", "N", "D", "AY"])])
    rows = confidence_table(stats, phone_set)
    assert len(rows) == 39

    ranked = [row for row in rows if row.ranked]
    assert [(row.phoneme, row.rank) for row in ranked] == [("AY", 1), ("N", 2), ("AE", 3), ("D", 4)]
    assert ranked[2].confidence == -1.0
    assert ranked[2].confusion_set == ("EH",)

    unranked = rows[len(ranked):]
    assert all(row.rank is None and row.confidence is None for row in unranked)
    assert [row.phoneme for row in unranked] == [s for s in phone_set.symbols if s not in {"AY", "N", "AE", "D"}]


def test_identical_corpus_gives_full_confidence(phone_set):
    stats = stats_from_pairs([(["AE", "N", "D"], ["AE", "N", "D"]), (["S", "AH", "N"], ["S", "AH", "N"])])
    rows = [row for row in confidence_table(stats, phone_set) if row.ranked]
    assert len(rows) == 5
    assert all(row.confidence == 1.0 and row.confusion_set == () for row in rows)


def test_table_rejects_empty_confusion_set(phone_set):
    with pytest.raises(ValueError):
        confidence_table(PhonemeStats(), phone_set, n=0)


def test_unknown_phoneme_in_path_raises(phone_set):
    with pytest.raises(UnknownPhonemeError):
        stats_from_pairs([(["AE", "Q"], ["AE"])], phone_set)


def test_single_substitution_matrix(phone_set):
    matrix = category_matrix(stats_from_pairs([(["AH"], ["AE"])]), phone_set)
    assert matrix.cell("ShortVowel", "ShortVowel") == 1.0
    assert matrix.counts.sum() == 1.0
    assert matrix.labels[-1] == EPSILON_LABEL
    assert matrix.values.shape == (9, 9)


def test_matrix_places_deletions_and_insertions_on_epsilon(phone_set):
    matrix = category_matrix(stats_from_pairs([(["AE"], ["AE", "D"]), (["HH", "AE"], ["AE"])]), phone_set)
    assert matrix.cell("Plosive", EPSILON_LABEL) == 1.0
    assert matrix.cell(EPSILON_LABEL, "Fricative") == 1.0
    assert matrix.row("ShortVowel") == {label: 0.0 for label in matrix.labels}


def test_matrix_rows_sum_to_one(phone_set):
    rng = random.Random(99)
    stats = stats_from_pairs(random_corpus(rng, phone_set, 200), phone_set)
    matrix = category_matrix(stats, phone_set)
    sums = matrix.values.sum(axis=1)
    raw = matrix.counts.sum(axis=1)
    for total, row_sum in zip(raw, sums):
        if total > 0:
            assert abs(row_sum - 1.0) < 1e-12
        else:
            assert row_sum == 0.0
    assert np.all(matrix.values >= 0.0)


def test_accumulate_leaves_input_untouched():
    base = stats_from_pairs([(["AE"], ["AE"])])
    snapshot = base.copy()
    updated = accumulate(base, align(["AH"], ["AE"]))
    assert base == snapshot
    assert updated.substitutions["AE"] == 1


def test_merge_is_commutative_and_order_independent(phone_set):
    rng = random.Random(3)
    corpus = random_corpus(rng, phone_set, 60)
    whole = stats_from_pairs(corpus)

    for _ in range(5):
        shuffled = corpus[:]
        rng.shuffle(shuffled)
        cut = rng.randint(0, len(shuffled))
        left, right = stats_from_pairs(shuffled[:cut]), stats_from_pairs(shuffled[cut:])
        assert merge(left, right) == whole
        assert right + left == whole
    assert merge(PhonemeStats(), whole) == whole


def test_insertion_ranking():
    stats = PhonemeStats(insertions=Counter({"HH": 4, "Y": 4, "AH": 1, "T": 0}))
    assert insertion_ranking(stats, 2) == [("HH", 4), ("Y", 4)]
    assert insertion_ranking(stats) == [("HH", 4), ("Y", 4), ("AH", 1)]


def test_category_confidence_and_drop_final_suggestion(phone_set):
    stats = PhonemeStats(
        correct=Counter({"AY": 4, "AE": 1, "N": 5, "T": 1, "D": 1, "S": 3}),
        substitutions=Counter({"AE": 3, "T": 2, "D": 1}),
        deletions=Counter({"Z": 2, "T": 1}),
    )
    rows = confidence_table(stats, phone_set)
    by_category = category_confidence(rows)
    assert by_category[PhonemeCategory.DIPHTHONG] == 1.0
    assert by_category[PhonemeCategory.SHORT_VOWEL] == -0.5
    assert by_category[PhonemeCategory.AFFRICATE] is None

    # Z -1.0, T -0.5, D 0.0, N 1.0, S 1.0
    assert suggest_drop_finals(rows, 3) == ("Z", "T", "D")
    assert suggest_drop_finals(rows, 5) == ("Z", "T", "D", "N", "S")
