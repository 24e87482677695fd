import random
import string

import pytest

from errors import LexiconParseError, OutOfVocabularyError, UnknownPhonemeError
from Lexicon import (Lexicon, LexiconEntry, OovPolicy, Pronunciation, PronunciationPolicy, VariantOrigin,
                     normalize_text, normalize_word, parse_lexicon, phonemize, serialize_lexicon,
                     words_ending_with)


def test_parse_strips_stress_and_merges_alternates(small_lexicon):
    assert len(small_lexicon) == 9
    entry = small_lexicon.get("AND")
    assert [pron.phones for pron in entry.prons] == [("AE", "N", "D"), ("AH", "N", "D")]
    assert all(pron.origin is VariantOrigin.BASE for pron in entry.prons)
    assert small_lexicon.get("MAKER").base.phones == ("M", "EY", "K", "ER")
    assert small_lexicon.pron_count() == 10


def test_parse_comments_and_blank_lines():
    lexicon = parse_lexicon(";;; header\n\nSEE  S IY1   # trailing comment\n")
    assert lexicon.words == ("SEE",)
    assert lexicon.get("SEE").base.phones == ("S", "IY")


def test_repeated_keys_merge_and_duplicates_are_dropped():
    lexicon = parse_lexicon("the  DH AH0\nTHE  DH IY0\nTHE(3)  DH AH1\n")
    assert [pron.phones for pron in lexicon.get("THE").prons] == [("DH", "AH"), ("DH", "IY")]


def test_malformed_line_reports_line_number():
    with pytest.raises(LexiconParseError) as excinfo:
        parse_lexicon("AND  AE N D\nBROKEN\n")
    assert excinfo.value.line == 2
    assert "line 2" in str(excinfo.value)


def test_unknown_phoneme_reports_word_and_line():
    with pytest.raises(UnknownPhonemeError) as excinfo:
        parse_lexicon("AND  AE N D\nHELLO  HH AH0 L QQ\n")
    assert excinfo.value.symbol == "QQ"
    assert excinfo.value.line == 2
    assert "HELLO" in str(excinfo.value)


def test_first_pronunciation_must_be_base():
    with pytest.raises(LexiconParseError):
        parse_lexicon("AND  AE N  ;; variant=ConsonantDrop\n")
    with pytest.raises(LexiconParseError):
        parse_lexicon("AND  AE N D  ;; variant=Whistled\n")


def test_serialize_writes_alternate_markers(small_lexicon):
    text = serialize_lexicon(small_lexicon)
    assert text.startswith("AN  AE N\nAND  AE N D\nAND(2)  AH N D\nDREAM  D R IY M\n")
    assert text.endswith("YOU  Y UW\n")
    assert serialize_lexicon(Lexicon()) == ""


def test_tagged_round_trip_restores_origins():
    entry = LexiconEntry("AND", (
        Pronunciation(("AE", "N", "D")),
        Pronunciation(("AE", "N"), VariantOrigin.CONSONANT_DROP),
        Pronunciation(("AE", "AE", "N", "D"), VariantOrigin.VOWEL_EXTEND),
    ))
    lexicon = Lexicon((entry,))
    text = serialize_lexicon(lexicon, tag_variants=True)
    assert "AND(2)  AE N  ;; variant=ConsonantDrop\n" in text
    assert parse_lexicon(text) == lexicon


def test_round_trip_fixpoint_on_large_dictionary(phone_set):
    rng = random.Random(2024)
    symbols = phone_set.symbols
    entries = []
    for i in range(10000):
        word = "".join(rng.choice(string.ascii_uppercase) for _ in range(rng.randint(1, 8))) + str(i)
        prons = []
        seen = set()
        for _ in range(rng.randint(1, 3)):
            phones = tuple(rng.choice(symbols) for _ in range(rng.randint(1, 7)))
            if phones not in seen:
                seen.add(phones)
                prons.append(Pronunciation(phones))
        entries.append(LexiconEntry(word, tuple(prons)))
    lexicon = Lexicon(tuple(entries))

    text = serialize_lexicon(lexicon)
    reparsed = parse_lexicon(text)
    assert reparsed == lexicon
    assert serialize_lexicon(reparsed) == text


def test_lexicon_rejects_unknown_phonemes_and_duplicate_words():
    with pytest.raises(UnknownPhonemeError):
        Lexicon((LexiconEntry("X", (Pronunciation(("QQ",)),)),))
    entry = LexiconEntry("A", (Pronunciation(("AH",)),))
    with pytest.raises(ValueError):
        Lexicon((entry, entry))


@pytest.mark.parametrize("token, expected", [
    ("Don't,", "DON'T"),
    ("'hello'", "HELLO"),
    ("love!", "LOVE"),
    ("...", ""),
    ("rock-n-roll", "ROCK-N-ROLL"),
])
def test_normalize_word(token, expected):
    assert normalize_word(token) == expected


def test_normalize_text():
    assert normalize_text("  And, I love -- you!  ") == ["AND", "I", "LOVE", "YOU"]


def test_phonemize_does_not_merge_word_boundaries(small_lexicon):
    result = phonemize(["dream", "maker"], small_lexicon)
    assert result.phones == ("D", "R", "IY", "M", "M", "EY", "K", "ER")
    assert result.word_index == (0, 0, 0, 0, 1, 1, 1, 1)
    assert result.oov_words == ()


def test_phonemize_oov_policies(small_lexicon):
    with pytest.raises(OutOfVocabularyError) as excinfo:
        phonemize(["I", "LOVE", "SINGING"], small_lexicon)
    assert excinfo.value.words == ("SINGING",)

    result = phonemize(["I", "LOVE", "SINGING"], small_lexicon, OovPolicy.SKIP)
    assert result.phones == ("AY", "L", "AH", "V")
    assert result.oov_words == ("SINGING",)


def test_phonemize_empty_input(small_lexicon):
    result = phonemize([], small_lexicon)
    assert result.phones == () and result.word_index == ()


def test_phonemize_shortest_policy():
    lexicon = parse_lexicon("THE  DH IY0 Y\nTHE(2)  DH AH0\n")
    assert phonemize(["the"], lexicon).phones == ("DH", "IY", "Y")
    assert phonemize(["the"], lexicon, pron_policy=PronunciationPolicy.SHORTEST).phones == ("DH", "AH")


def test_words_ending_with(small_lexicon):
    assert words_ending_with(small_lexicon, {"D", "T", "DH", "Z"}) == frozenset({"AND", "OCEANS"})
    assert words_ending_with(small_lexicon, set()) == frozenset()


def test_words_ending_with_distributes_over_union(phone_set):
    rng = random.Random(31)
    lexicon = parse_lexicon(
        "".join(f"W{i}  " + " ".join(rng.choice(phone_set.symbols) for _ in range(rng.randint(1, 5))) + "\n"
                for i in range(400)),
        phone_set,
    )
    for _ in range(50):
        first = set(rng.sample(phone_set.symbols, rng.randint(0, 8)))
        second = set(rng.sample(phone_set.symbols, rng.randint(0, 8)))
        assert words_ending_with(lexicon, first | second) == (
            words_ending_with(lexicon, first) | words_ending_with(lexicon, second))
