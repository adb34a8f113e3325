from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from demojibake.readability import (MS_PER_CHAR, TextStats, automated_readability_index, coleman_liau,
                                    consensus_grade, count_syllables, dale_chall, dale_chall_grade, flesch_grade,
                                    flesch_kincaid_grade, flesch_reading_ease, readability_report, reading_time,
                                    round_half_up, text_standard, tokenize_stats)

# (text, sentences, words, letters, characters, syllables, difficult) counted by hand
FIXTURES = [
    ("The cat sat.", 1, 3, 9, 9, 3, 0),
    ("Hi! Go.", 2, 2, 4, 4, 2, 1),
    ("Extraordinary circumstances require patience.", 1, 4, 41, 41, 13, 4),
    ("I can't swim. She can run fast!", 2, 7, 22, 22, 7, 0),
    ("Reading 42 books in 2024 is wonderful.", 1, 7, 25, 31, 10, 0),
]


def oracle(sentences, words, letters, characters, syllables, difficult):
    """The five formulas in exact rational arithmetic."""
    wps, spw = F(words, sentences), F(syllables, words)
    share = F(difficult, words)
    dc = F("0.1579") * 100 * share + F("0.0496") * wps + (F("3.6365") if share > F(5, 100) else 0)
    return {
        "fre": F("206.835") - F("1.015") * wps - F("84.6") * spw,
        "fkg": F("0.39") * wps + F("11.8") * spw - F("15.59"),
        "cli": F("0.0588") * 100 * F(letters, words) - F("0.296") * 100 * F(sentences, words) - F("15.8"),
        "ari": F("4.71") * F(characters, words) + F("0.5") * wps - F("21.43"),
        "dc": dc,
    }


@pytest.mark.parametrize("text,sentences,words,letters,characters,syllables,difficult", FIXTURES)
def test_hand_counted_stats(text, sentences, words, letters, characters, syllables, difficult):
    assert tokenize_stats(text) == TextStats(sentences, words, letters, characters, syllables, difficult)


@pytest.mark.parametrize("fixture", FIXTURES, ids=[f[0] for f in FIXTURES])
def test_formulas_match_exact_oracle(fixture):
    stats = TextStats(*fixture[1:])
    want = oracle(*fixture[1:])
    assert flesch_reading_ease(stats) == pytest.approx(float(want["fre"]), abs=1e-9)
    assert flesch_kincaid_grade(stats) == pytest.approx(float(want["fkg"]), abs=1e-9)
    assert coleman_liau(stats) == pytest.approx(float(want["cli"]), abs=1e-9)
    assert automated_readability_index(stats) == pytest.approx(float(want["ari"]), abs=1e-9)
    assert dale_chall(stats) == pytest.approx(float(want["dc"]), abs=1e-9)


def test_cat_sat_published_values():
    stats = tokenize_stats("The cat sat.")
    assert flesch_reading_ease(stats) == pytest.approx(119.19, abs=1e-9)
    assert flesch_kincaid_grade(stats) == pytest.approx(-2.62, abs=1e-9)
    assert automated_readability_index(stats) == pytest.approx(-5.80, abs=1e-9)
    assert coleman_liau(stats) == pytest.approx(-8.026666666666667, abs=1e-9)
    assert dale_chall(stats) == pytest.approx(0.1488, abs=1e-9)


def test_empty_text():
    assert tokenize_stats("") == TextStats()
    with pytest.raises(ValueError):
        flesch_reading_ease(TextStats())
    report = readability_report("!! ...")
    assert not report.has_words and report.ari is None and report.text_standard is None
    assert report.reading_time_s == pytest.approx(6 * MS_PER_CHAR / 1000)
    # an emoji is a word token with no letters
    assert tokenize_stats("😂") == TextStats(1, 1, 0, 1, 1, 0)


def test_syllable_heuristic():
    words = ("cat", "table", "make", "café", "rhythm", "queue", "reading")
    assert [count_syllables(w) for w in words] == [1, 2, 1, 1, 1, 1, 2]


def test_text_standard_examples():
    assert consensus_grade([3, 3, 3, 5, 3]) == 3
    assert consensus_grade([2, 2, 4, 4, 5]) == 2
    assert text_standard(flesch_kincaid=6.6) == 7
    assert text_standard() is None


def test_grade_bands_and_rounding():
    assert [dale_chall_grade(x) for x in (4.9, 5.0, 6.5, 7.9, 8.5, 9.9, 10.0)] == [4, 5, 7, 9, 11, 13, 16]
    assert [flesch_grade(x) for x in (95, 85, 75, 65, 55, 40, 10)] == [5, 6, 7, 8, 10, 13, 16]
    assert [round_half_up(x) for x in (2.5, -2.5, 2.49)] == [3, -2, 2]


def test_reading_time_examples():
    assert reading_time("x" * 100) == pytest.approx(1.469)
    assert reading_time("") == 0.0
    assert reading_time("y" * 45) == pytest.approx(0.66105)


def test_report_fields():
    report = readability_report("The cat sat.")
    assert report.flesch_reading_ease == pytest.approx(119.19)
    assert set(report.as_dict()) == set(report.METRICS)


@given(st.text(max_size=80), st.text(max_size=80))
def test_reading_time_is_additive(a, b):
    assert reading_time(a + b) == pytest.approx(reading_time(a) + reading_time(b))


@given(st.text(alphabet=st.characters(max_codepoint=0x7F), max_size=200))
def test_stats_are_consistent(text):
    s = tokenize_stats(text)
    assert s.letters <= s.characters
    assert s.difficult_words <= s.words <= s.syllables or s.words == 0
    assert (s.words == 0) == (s.sentences == 0)
