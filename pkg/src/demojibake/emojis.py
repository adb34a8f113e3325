"""Emoji identification, shortname lookup and frequency counting.

Extraction works on codepoints by default: every emoji codepoint is its own
occurrence, skin-tone modifiers stay attached to the base they follow, and
ZWJ / VS-16 are dropped.  That is why "woman shrugging" is counted as
``shrug`` plus ``female_sign``.  ``mode="cluster"`` keeps whole ZWJ sequences
(and regional-indicator flag pairs) together instead.

The name table is ``data/emoji_names.tsv``: one mapping per line,
``hex-codepoint-sequence<TAB>shortname``, with VS-16 removed from the keys.
"""

from __future__ import annotations

import bisect
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Iterator, Union

ZWJ = 0x200D
VS16 = 0xFE0F
SKIN_TONES = range(0x1F3FB, 0x1F400)
REGIONAL_INDICATORS = range(0x1F1E6, 0x1F200)

# Inclusive ranges, sorted by start.
EMOJI_RANGES = (
    (0x231A, 0x231B), (0x2328, 0x2328), (0x23CF, 0x23CF), (0x23E9, 0x23F3),
    (0x23F8, 0x23FA),
    (0x2600, 0x26FF),   # miscellaneous symbols (incl. female/male sign)
    (0x2700, 0x27BF),   # dingbats
    (0x2B05, 0x2B07), (0x2B1B, 0x2B1C), (0x2B50, 0x2B50), (0x2B55, 0x2B55),
    (0x3030, 0x3030), (0x303D, 0x303D), (0x3297, 0x3297), (0x3299, 0x3299),
    (0x1F004, 0x1F004), (0x1F0CF, 0x1F0CF),
    (0x1F170, 0x1F251),  # enclosed alphanumerics/ideographs, regional indicators
    (0x1F300, 0x1F5FF),  # misc symbols and pictographs
    (0x1F600, 0x1F64F),  # emoticons
    (0x1F680, 0x1F6FF),  # transport and map
    (0x1F7E0, 0x1F7F0),  # coloured geometric shapes
    (0x1F900, 0x1F9FF),  # supplemental symbols and pictographs
    (0x1FA70, 0x1FAFF),  # symbols and pictographs extended-A
)
_STARTS = [lo for lo, _ in EMOJI_RANGES]


def _class(ranges) -> str:
    return "".join(f"{re.escape(chr(lo))}-{re.escape(chr(hi))}" for lo, hi in ranges)


# emoji codepoints as one character class (skin tones carved out)
_EMOJI_RE = re.compile("[" + _class(
    [r for lo, hi in EMOJI_RANGES
     for r in ([(lo, SKIN_TONES.start - 1), (SKIN_TONES.stop, hi)] if lo < SKIN_TONES.start and hi >= SKIN_TONES.stop
               else [(lo, hi)])]
) + "]")


def _cp(c: int | str) -> int:
    return c if isinstance(c, int) else ord(c)


def is_emoji_modifier(cp: int | str) -> bool:
    """ZWJ, VS-16 and the five skin-tone modifiers."""
    cp = _cp(cp)
    return cp == ZWJ or cp == VS16 or cp in SKIN_TONES


def is_emoji_codepoint(cp: int | str) -> bool:
    cp = _cp(cp)
    if cp < 0x231A or cp in SKIN_TONES:
        return False
    i = bisect.bisect_right(_STARTS, cp) - 1
    return i >= 0 and cp <= EMOJI_RANGES[i][1]


def count_emoji_codepoints(text: str) -> int:
    return len(_EMOJI_RE.findall(text))


def is_emoji_only(text: str) -> bool:
    """Non-empty and made only of emoji codepoints and modifiers."""
    return bool(text) and all(is_emoji_codepoint(c) or is_emoji_modifier(c) for c in text)


# -- names -----------------------------------------------------------------

@lru_cache(maxsize=1)
def name_table() -> dict[tuple[int, ...], str]:
    table = {}
    path = resources.files("demojibake") / "data" / "emoji_names.tsv"
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        seq, name = line.split("\t")
        table[tuple(int(h, 16) for h in seq.split())] = name
    return table


@lru_cache(maxsize=1)
def codepoints_for_name() -> dict[str, tuple[int, ...]]:
    out: dict[str, tuple[int, ...]] = {}
    for seq, name in name_table().items():
        if name not in out or len(seq) < len(out[name]):
            out[name] = seq
    return out


def shortname(codepoints: Iterable[int | str] | str) -> str | None:
    """Shortname of an emoji sequence, or None when the table has no entry."""
    key = tuple(_cp(c) for c in codepoints if _cp(c) != VS16)
    return name_table().get(key)


def hex_key(codepoints: Iterable[int]) -> str:
    return "_".join(f"u{cp:x}" for cp in codepoints if cp != VS16)


@dataclass(frozen=True)
class EmojiOccurrence:
    codepoints: tuple[int, ...]
    shortname: str | None
    offset: int

    @property
    def key(self) -> str:
        """Counting key: the shortname, or a hex key such as ``u1fae0``."""
        return self.shortname if self.shortname is not None else hex_key(self.codepoints)

    @property
    def text(self) -> str:
        return "".join(map(chr, self.codepoints))


def _iter_codepoint_mode(text: str) -> Iterator[EmojiOccurrence]:
    n = len(text)
    for m in _EMOJI_RE.finditer(text):
        i = m.start()
        cp = ord(text[i])
        seq = (cp,)
        if i + 1 < n and ord(text[i + 1]) in SKIN_TONES:
            seq = (cp, ord(text[i + 1]))
        name = shortname(seq)
        if name is None and len(seq) == 2:
            # tone variants without their own entry fall back to the base
            name = shortname(seq[:1])
        yield EmojiOccurrence(seq, name, i)


def _iter_cluster_mode(text: str) -> Iterator[EmojiOccurrence]:
    n = len(text)
    i = 0
    while i < n:
        cp = ord(text[i])
        if not is_emoji_codepoint(cp):
            i += 1
            continue
        start = i
        seq = [cp]
        i += 1
        if cp in REGIONAL_INDICATORS and i < n and ord(text[i]) in REGIONAL_INDICATORS:
            seq.append(ord(text[i]))
            i += 1
        while i < n:
            nxt = ord(text[i])
            if nxt == VS16 or nxt in SKIN_TONES:
                seq.append(nxt)
                i += 1
            elif nxt == ZWJ and i + 1 < n and is_emoji_codepoint(text[i + 1]):
                seq += [nxt, ord(text[i + 1])]
                i += 2
            else:
                break
        key = tuple(c for c in seq if c != VS16)
        yield EmojiOccurrence(key, shortname(key), start)


def extract_emojis(text: str, mode: str = "codepoint") -> list[EmojiOccurrence]:
    if mode == "codepoint":
        return list(_iter_codepoint_mode(text))
    if mode == "cluster":
        return list(_iter_cluster_mode(text))
    raise ValueError(f"mode must be 'codepoint' or 'cluster', not {mode!r}")


# -- frequencies -----------------------------------------------------------

@dataclass(frozen=True)
class FrequencyTable:
    """Counts sorted by count descending, then name ascending."""

    entries: tuple[tuple[str, int], ...] = ()
    total: int = field(default=0)

    @classmethod
    def from_counts(cls, counts: Counter | dict) -> FrequencyTable:
        items = tuple(sorted(((k, v) for k, v in counts.items() if v > 0), key=lambda kv: (-kv[1], kv[0])))
        return cls(items, sum(v for _, v in items))

    def as_counter(self) -> Counter:
        return Counter(dict(self.entries))

    def merge(self, other: FrequencyTable) -> FrequencyTable:
        return FrequencyTable.from_counts(self.as_counter() + other.as_counter())

    __add__ = merge

    def top(self, n: int | None) -> list[tuple[str, int]]:
        return list(self.entries if n is None else self.entries[:n])

    def to_csv(self, n: int | None = None) -> str:
        rows = ["name,count"] + [f"{name},{count}" for name, count in self.top(n)]
        return "\n".join(rows) + "\n"

    def __len__(self) -> int:
        return len(self.entries)


def frequency_table(occurrences: Iterable[Union[EmojiOccurrence, str]]) -> FrequencyTable:
    """Count a stream of occurrences (or bare shortnames)."""
    counts = Counter(o.key if isinstance(o, EmojiOccurrence) else o for o in occurrences)
    return FrequencyTable.from_counts(counts)
