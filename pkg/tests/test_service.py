import os
import random

import numpy as np
import pytest

from AnalysisService import AlignmentLevel, AnalysisService, ServiceConfig, _shard
from Alignment import EditKind
from ErrorScoring import parse_transcripts, read_transcripts
from errors import OutOfVocabularyError
from Lexicon import OovPolicy, read_lexicon


def transcripts(*lines):
    return parse_transcripts("".join(line + "\n" for line in lines))


@pytest.fixture
def sample(sample_dir):
    def load(name):
        return read_transcripts(os.path.join(sample_dir, name))
    return {
        "lexicon": read_lexicon(os.path.join(sample_dir, "lexicon.dict")),
        "hyp_words": load("hyp_words.txt"),
        "ref_words": load("ref_words.txt"),
        "baseline_words": load("baseline_hyp_words.txt"),
        "hyp_phones": load("hyp_phones.txt"),
        "ref_phones": load("ref_phones.txt"),
    }


def random_phone_corpus(rng, phone_set, size):
    symbols = phone_set.symbols
    hyp_lines, ref_lines = [], []
    for i in range(size):
        ref = [rng.choice(symbols) for _ in range(rng.randint(1, 12))]
        hyp = [rng.choice(symbols) if rng.random() < 0.25 else p for p in ref if rng.random() > 0.1]
        if rng.random() < 0.4:
            hyp.insert(rng.randint(0, len(hyp)), rng.choice(symbols))
        hyp_lines.append(" ".join([f"u{i:03d}"] + hyp))
        ref_lines.append(" ".join([f"u{i:03d}"] + ref))
    return transcripts(*hyp_lines), transcripts(*ref_lines)


def test_shard_round_robin():
    assert _shard(["a", "b", "c", "d", "e"], 2) == [["a", "c", "e"], ["b", "d"]]
    assert _shard(["a"], 4) == [["a"]]
    assert _shard([], 3) == []


@pytest.mark.parametrize("workers", [2, 3, 7])
def test_results_do_not_depend_on_worker_count(phone_set, workers):
    hyps, refs = random_phone_corpus(random.Random(42), phone_set, 120)
    single = AnalysisService(config=ServiceConfig(workers=1)).analyze(hyps, refs).payload
    sharded = AnalysisService(config=ServiceConfig(workers=workers)).analyze(hyps, refs).payload

    assert sharded.stats == single.stats
    assert sharded.rows == single.rows
    assert np.array_equal(sharded.matrix.counts, single.matrix.counts)
    assert sharded.top_insertions == single.top_insertions


def test_analyze_sample_corpus(sample):
    service = AnalysisService()
    result = service.analyze(sample["hyp_phones"], sample["ref_phones"], topn=2, suggest_finals=2)

    assert result.operation == "analyze"
    assert result.item_count == 6
    assert result.execution_time >= 0.0

    analysis = result.payload
    assert analysis.utterances == 6
    assert analysis.topn == 2
    assert len(analysis.rows) == 39
    assert len(analysis.suggested_drop_finals) == 2
    assert all(len(row.confusion_set) <= 2 for row in analysis.rows)
    # every ref-side D, T and Z the singer dropped shows up as a deletion
    assert analysis.stats.deletions["T"] >= 1
    assert analysis.stats.deletions["Z"] >= 1


def test_performance_stats():
    service = AnalysisService()
    assert service.get_performance_stats()["total_operations"] == 0

    refs = transcripts("u1 AE N D")
    service.analyze(refs, refs)
    service.analyze(refs, refs)
    service.align(refs, refs)

    stats = service.get_performance_stats()
    assert stats["total_operations"] == 3
    assert stats["operations"]["analyze"]["count"] == 2
    assert stats["operations"]["align"]["count"] == 1
    assert stats["operations"]["analyze"]["min_time"] <= stats["operations"]["analyze"]["max_time"]

    service.clear_performance_stats()
    assert service.get_performance_stats()["operations"] == {}


def test_phonemize_utterances_policies(small_lexicon):
    words = transcripts("u1 i love singing")

    with pytest.raises(OutOfVocabularyError):
        AnalysisService().phonemize_utterances(words, small_lexicon)

    service = AnalysisService(config=ServiceConfig(oov_policy=OovPolicy.SKIP))
    phonemized = service.phonemize_utterances(words, small_lexicon)
    assert phonemized["u1"].tokens == ("AY", "L", "AH", "V")


def test_score_sample_corpus(sample):
    service = AnalysisService()
    result = service.score(sample["hyp_words"], sample["ref_words"], lexicon=sample["lexicon"],
                           hyp_phones=sample["hyp_phones"], ref_phones=sample["ref_phones"],
                           baseline_hyps=sample["baseline_words"])
    score = result.payload

    assert list(score.reports) == ["word", "char", "word_subset", "vowel", "consonant"]
    assert list(score.baseline) == list(score.reports)
    assert list(score.comparisons) == list(score.reports)

    word = score.reports["word"]
    assert (word.n_ref, word.substitutions, word.insertions, word.deletions) == (29, 2, 1, 1)
    assert word.error_rate == pytest.approx(400.0 / 29)


def test_score_without_lexicon_reports_words_and_characters_only(sample):
    score = AnalysisService().score(sample["hyp_words"], sample["ref_words"],
                                    hyp_phones=sample["hyp_phones"]).payload
    assert list(score.reports) == ["word", "char"]
    assert score.comparisons == {}


def test_score_phonemizes_words_when_phones_are_missing(sample):
    score = AnalysisService().score(sample["ref_words"], sample["ref_words"], lexicon=sample["lexicon"],
                                    ref_phones=sample["ref_phones"]).payload
    assert "vowel" in score.reports and "consonant" in score.reports


def test_character_alignment_of_one_utterance():
    hyps = transcripts("u1 cut", "u2 hold me")
    refs = transcripts("u1 cat", "u2 hold me")
    result = AnalysisService().align(hyps, refs, AlignmentLevel.CHAR, utterance_id="u1")

    assert result.item_count == 1
    utt_id, path = result.payload[0]
    assert utt_id == "u1"
    assert [op.kind for op in path] == [EditKind.MATCH, EditKind.SUBSTITUTE, EditKind.MATCH]


def test_token_alignment_covers_every_utterance():
    hyps = transcripts("u1 cut", "u2 hold me")
    refs = transcripts("u1 cat", "u2 hold me")
    result = AnalysisService().align(hyps, refs)
    assert [utt_id for utt_id, _ in result.payload] == ["u1", "u2"]
    assert AnalysisService().align(hyps, refs, utterance_id="u9").item_count == 0


def test_service_config_from_env(monkeypatch):
    monkeypatch.setenv("PRON_WORKERS", "3")
    monkeypatch.setenv("PRON_TOPN", "5")

    config = ServiceConfig.from_env()
    assert (config.workers, config.topn) == (3, 5)
    assert ServiceConfig.from_env(topn=2, workers=None).topn == 2
    assert ServiceConfig.from_env(workers=None).workers == 3


def test_service_config_rejects_invalid_values():
    with pytest.raises(ValueError):
        ServiceConfig(workers=0)
    with pytest.raises(ValueError):
        ServiceConfig(topn=0)
