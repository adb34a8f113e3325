"""Readability formulas and reading time.

Tokenization
    A word is a maximal run of codepoints that are neither ASCII whitespace
    nor ASCII punctuation (the apostrophe is allowed inside words).  On plain
    ASCII text this is exactly "runs of letters, digits and apostrophes".  On
    social media text it also keeps emoji and mojibake fragments as word
    material, so a three-codepoint "Ã©" or a four-codepoint "ðŸ˜‚" weighs as
    much as it looks, and repairing it shortens the word.

``letters`` counts alphabetic codepoints; ``characters`` counts every word
codepoint except apostrophes (letters and digits on ASCII text).  Sentences
end at runs of ``.``, ``!`` or ``?`` followed by whitespace or the end of the
text.
"""

from __future__ import annotations

import math
import re
import string
import unicodedata
from collections import Counter
from dataclasses import asdict, dataclass
from functools import lru_cache
from importlib import resources

MS_PER_CHAR = 14.69

_SEPARATORS = set(string.whitespace) | set(string.punctuation) - {"'"}
_WORD = re.compile("[^" + re.escape("".join(sorted(_SEPARATORS))) + "]+")
_SENTENCE_END = re.compile(r"[.!?]+(?=\s|$)")
_VOWEL_GROUP = re.compile("[aeiouy]+")
_CONSONANT_LE = re.compile("[^aeiouy]le$")
_SUFFIXES = ("ing", "es", "ed", "ly", "s")


@dataclass(frozen=True)
class TextStats:
    sentences: int = 0
    words: int = 0
    letters: int = 0
    characters: int = 0
    syllables: int = 0
    difficult_words: int = 0


@lru_cache(maxsize=1)
def dale_chall_words() -> frozenset[str]:
    path = resources.files("demojibake") / "data" / "dale_chall.txt"
    return frozenset(w.strip() for w in path.read_text(encoding="utf-8").splitlines() if w.strip())


def _fold(word: str) -> str:
    """Lowercase and strip accents, for the vowel heuristic and word lookup."""
    decomposed = unicodedata.normalize("NFKD", word.lower())
    return "".join(c for c in decomposed if not unicodedata.combining(c))


@lru_cache(maxsize=65536)
def count_syllables(word: str) -> int:
    w = _fold(word).replace("'", "")
    n = len(_VOWEL_GROUP.findall(w))
    if w.endswith("e") and not _CONSONANT_LE.search(w):
        n -= 1
    return max(1, n)


def is_difficult(word: str, familiar: frozenset[str] | None = None) -> bool:
    """Not on the familiar list, even after stripping a common suffix.

    Words without any letter (numbers, emoji) are never difficult.
    """
    if not any(c.isalpha() for c in word):
        return False
    familiar = dale_chall_words() if familiar is None else familiar
    w = word.lower().strip("'")
    if w in familiar:
        return False
    for suffix in _SUFFIXES:
        if w.endswith(suffix) and w[: -len(suffix)] in familiar:
            return False
    return True


@lru_cache(maxsize=65536)
def _difficult_default(word: str) -> bool:
    return is_difficult(word, dale_chall_words())


def _sentence_count(text: str) -> int:
    return sum(1 for chunk in _SENTENCE_END.split(text) if _WORD.search(chunk))


def tokenize_stats(text: str) -> TextStats:
    words = _WORD.findall(text)
    if not words:
        return TextStats()
    return TextStats(
        sentences=max(1, _sentence_count(text)),
        words=len(words),
        letters=sum(1 for w in words for c in w if c.isalpha()),
        characters=sum(len(w) - w.count("'") for w in words),
        syllables=sum(map(count_syllables, words)),
        difficult_words=sum(map(_difficult_default, words)),
    )


def _check(stats: TextStats):
    if stats.words < 1 or stats.sentences < 1:
        raise ValueError("readability formulas need at least one word and one sentence")


def flesch_reading_ease(stats: TextStats) -> float:
    _check(stats)
    return 206.835 - 1.015 * (stats.words / stats.sentences) - 84.6 * (stats.syllables / stats.words)


def flesch_kincaid_grade(stats: TextStats) -> float:
    _check(stats)
    return 0.39 * (stats.words / stats.sentences) + 11.8 * (stats.syllables / stats.words) - 15.59


def coleman_liau(stats: TextStats) -> float:
    _check(stats)
    letters_per_100 = 100.0 * stats.letters / stats.words
    sentences_per_100 = 100.0 * stats.sentences / stats.words
    return 0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8


def automated_readability_index(stats: TextStats) -> float:
    _check(stats)
    return 4.71 * (stats.characters / stats.words) + 0.5 * (stats.words / stats.sentences) - 21.43


def dale_chall(stats: TextStats) -> float:
    _check(stats)
    share = stats.difficult_words / stats.words
    score = 0.1579 * (100.0 * share) + 0.0496 * (stats.words / stats.sentences)
    if share > 0.05:
        score += 3.6365
    return score


def reading_time(text: str, ms_per_char: float = MS_PER_CHAR) -> float:
    """Seconds to read ``text`` at a fixed cost per codepoint."""
    return len(text) * ms_per_char / 1000.0


# -- consensus grade -------------------------------------------------------

def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


_DC_BANDS = ((5.0, 4), (6.0, 5), (7.0, 7), (8.0, 9), (9.0, 11), (10.0, 13))
_FRE_BANDS = ((90.0, 5), (80.0, 6), (70.0, 7), (60.0, 8), (50.0, 10), (30.0, 13))


def dale_chall_grade(score: float) -> int:
    for upper, grade in _DC_BANDS:
        if score < upper:
            return grade
    return 16


def flesch_grade(score: float) -> int:
    for lower, grade in _FRE_BANDS:
        if score >= lower:
            return grade
    return 16


def consensus_grade(grades) -> int | None:
    """Mode of integer grades, lowest grade on ties; None when empty."""
    grades = [g for g in grades if g is not None]
    if not grades:
        return None
    counts = Counter(grades)
    top = max(counts.values())
    return min(g for g, n in counts.items() if n == top)


def text_standard(flesch_kincaid: float | None = None, ari: float | None = None,
                  coleman: float | None = None, dale: float | None = None,
                  flesch_ease: float | None = None) -> int | None:
    """Consensus school grade of the five grade-bearing metrics.

    FKG, ARI and Coleman-Liau are rounded directly; Dale-Chall and Flesch
    reading ease go through their usual grade bands.  Missing metrics are
    skipped.
    """
    grades = [
        None if flesch_kincaid is None else round_half_up(flesch_kincaid),
        None if ari is None else round_half_up(ari),
        None if coleman is None else round_half_up(coleman),
        None if dale is None else dale_chall_grade(dale),
        None if flesch_ease is None else flesch_grade(flesch_ease),
    ]
    return consensus_grade(grades)


@dataclass(frozen=True)
class ReadabilityReport:
    flesch_reading_ease: float | None
    flesch_kincaid_grade: float | None
    coleman_liau: float | None
    ari: float | None
    dale_chall: float | None
    text_standard: int | None
    reading_time_s: float

    METRICS = ("flesch_reading_ease", "flesch_kincaid_grade", "coleman_liau", "ari",
               "dale_chall", "text_standard", "reading_time_s")

    @property
    def has_words(self) -> bool:
        return self.flesch_reading_ease is not None

    def as_dict(self) -> dict:
        return asdict(self)


def readability_report(text: str, ms_per_char: float = MS_PER_CHAR) -> ReadabilityReport:
    """All metrics for ``text``; grade metrics are None when it has no words."""
    stats = tokenize_stats(text)
    rt = reading_time(text, ms_per_char)
    if stats.words == 0:
        return ReadabilityReport(None, None, None, None, None, None, rt)
    fre = flesch_reading_ease(stats)
    fkg = flesch_kincaid_grade(stats)
    cli = coleman_liau(stats)
    ari = automated_readability_index(stats)
    dc = dale_chall(stats)
    return ReadabilityReport(fre, fkg, cli, ari, dc, text_standard(fkg, ari, cli, dc, fre), rt)
