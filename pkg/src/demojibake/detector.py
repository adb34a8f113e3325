"""Locate likely mojibake in decoded text.

Five per-codepoint signals feed a weighted score:

``c1_control``
    U+0080-U+009F; authored text practically never contains them.
``replacement_char``
    U+FFFD left behind by a lossy decode.
``lead_signature``
    One of ``Ã Â ð â Å Ÿ`` directly followed by a Latin-1 symbol or a
    General Punctuation character (the typical shape of UTF-8 read as
    cp1252/latin-1).
``latin1_density``
    More than 10% of the codepoints are Latin-1 Supplement non-letters.
``utf8_reencode``
    Some single-byte codec turns the characters back into a well-formed
    multi-byte UTF-8 sequence.

The last signal is the strongest, and also the noisiest: with 60-odd code
pages some legitimate letter pairs re-encode to valid UTF-8 by accident
(Czech "ří" under mac_latin2, Russian "род" under cp866).  Re-encoded units
made only of letters in a natural case pattern are therefore *weak*: they only
count when the same codec also produces unambiguous evidence somewhere in the
text.

These features are a concrete, documented heuristic rather than a learned
model.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from . import registry
from .emojis import is_emoji_codepoint, is_emoji_modifier

C1_CONTROL = "c1_control"
REPLACEMENT_CHAR = "replacement_char"
LEAD_SIGNATURE = "lead_signature"
LATIN1_DENSITY = "latin1_density"
UTF8_REENCODE = "utf8_reencode"

FEATURES = (UTF8_REENCODE, C1_CONTROL, REPLACEMENT_CHAR, LEAD_SIGNATURE, LATIN1_DENSITY)

DEFAULT_WEIGHTS = {
    UTF8_REENCODE: 0.6,
    C1_CONTROL: 0.5,
    REPLACEMENT_CHAR: 0.4,
    LEAD_SIGNATURE: 0.4,
    LATIN1_DENSITY: 0.2,
}

LATIN1_DENSITY_LIMIT = 0.10
LEAD_CHARS = frozenset("ÃÂðâÅŸ")
_EMOJI_EVIDENCE = "_emoji_evidence"


@dataclass(frozen=True)
class DetectorConfig:
    threshold: float = 0.5
    weights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must be in [0, 1], got {self.threshold}")
        unknown = set(self.weights) - set(FEATURES)
        if unknown:
            raise ValueError(f"unknown detector features: {sorted(unknown)}")
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("feature weights must be nonnegative")

    def __hash__(self):
        return hash((self.threshold, tuple(sorted(self.weights.items()))))

    def weight(self, feature: str) -> float:
        return self.weights.get(feature, DEFAULT_WEIGHTS[feature])

    def score(self, triggers) -> float:
        return min(1.0, float(sum(self.weight(f) for f in triggers)))


DEFAULT_CONFIG = DetectorConfig()


@dataclass(frozen=True, order=True)
class GibberishSpan:
    start: int
    end: int
    score: float = field(compare=False)
    triggers: frozenset[str] = field(compare=False, default=frozenset())

    def __len__(self) -> int:
        return self.end - self.start

    def slice(self, text: str) -> str:
        return text[self.start:self.end]


# -- character classes -----------------------------------------------------

@lru_cache(maxsize=4096)
def _is_latin_letter(ch: str) -> bool:
    return ch.isalpha() and (ch.isascii() or unicodedata.name(ch, "").startswith("LATIN"))


def _is_latin1_symbol(ch: str) -> bool:
    return "\x80" <= ch <= "ÿ" and not ch.isalpha()


def _is_c1(ch: str) -> bool:
    return "\x80" <= ch <= "\x9f"


def _lead_follower(ch: str) -> bool:
    if " " <= ch <= "⁯":
        return True
    return "\x80" <= ch <= "ÿ" and not ch.isalpha()


def _natural_case(unit: str) -> bool:
    cased = [c for c in unit if c.islower() or c.isupper()]
    if not cased:
        return True
    word = "".join(cased)
    return word.islower() or word.isupper() or (word[0].isupper() and word[1:].islower())


# -- re-encode matchers ----------------------------------------------------

_CONT = range(0x80, 0xC0)
# UTF-8 multi-byte shapes: lead byte ranges and the allowed range of the first
# continuation byte (the rest are 0x80-0xBF).
_SHAPES = (
    (range(0xC2, 0xE0), _CONT, 1),
    (range(0xE0, 0xE1), range(0xA0, 0xC0), 2),
    (tuple(range(0xE1, 0xED)) + (0xEE, 0xEF), _CONT, 2),
    (range(0xED, 0xEE), range(0x80, 0xA0), 2),
    (range(0xF0, 0xF1), range(0x90, 0xC0), 3),
    (range(0xF1, 0xF4), _CONT, 3),
    (range(0xF4, 0xF5), range(0x80, 0x90), 3),
)


def _byte_class(values) -> str:
    values = list(values)
    return f"[\\x{values[0]:02x}-\\x{values[-1]:02x}]" if values == list(range(values[0], values[-1] + 1)) \
        else "[" + "".join(f"\\x{v:02x}" for v in values) + "]"


_UTF8_MULTI = re.compile("|".join(
    _byte_class(leads) + _byte_class(first) + _byte_class(_CONT) * (extra - 1) for leads, first, extra in _SHAPES
))

# one re-encoded unit: a valid multi-byte sequence, an ASCII byte, or a byte
# that starts neither (including characters the codec cannot encode)
_UTF8_UNIT = re.compile(f"(?P<multi>{_UTF8_MULTI.pattern})|(?P<ascii>[\\x00-\\x7f])|(?P<bad>.)", re.S)


def _char_class(decode_map, byte_values) -> str | None:
    chars = [chr(decode_map[b]) for b in byte_values if decode_map[b] >= 0]
    if not chars:
        return None
    return "[" + "".join(re.escape(c) for c in chars) + "]"


@dataclass(frozen=True)
class _Reencoder:
    name: str
    pattern: re.Pattern
    encode_map: Mapping[int, int]
    repertoire: frozenset[str]  # non-ASCII characters the codec can encode
    ascii_compatible: bool
    byte_view: Mapping[int, str] = field(default_factory=dict, repr=False)

    def byte(self, ch: str) -> int | None:
        return self.encode_map.get(ord(ch))

    def multi_units(self, text: str) -> list[tuple[int, int]]:
        """Greedy left-to-right UTF-8 multi-byte units of the re-encoded text."""
        return [m.span() for m in _UTF8_MULTI.finditer(text.translate(self.byte_view))]


class _ByteView(dict):
    """``str.translate`` table: character -> its byte as a one-char string.

    Characters the codec cannot encode become U+0100, which no UTF-8 byte
    class matches.
    """

    def __missing__(self, key):
        return "\u0100"


def _build_reencoder(table: registry.CodecTable) -> _Reencoder:
    dm = table.decode_map
    cont = _char_class(dm, _CONT)
    alts = []
    for leads, first, extra in _SHAPES:
        lead_cls, first_cls = _char_class(dm, leads), _char_class(dm, first)
        if lead_cls and first_cls and cont:
            alts.append(lead_cls + first_cls + (cont * (extra - 1)))
    pattern = re.compile("|".join(alts) if alts else "(?!)")
    repertoire = frozenset(chr(cp) for cp in table.encode_map if cp >= 0x80)
    ascii_ok = dm[:128] == tuple(range(128))
    view = _ByteView((cp, chr(b)) for cp, b in table.encode_map.items())
    return _Reencoder(table.name, pattern, table.encode_map, repertoire, ascii_ok, view)


def _reencoders() -> tuple[_Reencoder, ...]:
    return _reencoders_at(registry.catalog_generation())


@lru_cache(maxsize=1)
def _reencoders_at(generation: int) -> tuple[_Reencoder, ...]:
    return tuple(
        _build_reencoder(registry.codec_table(c))
        for c in registry.list_codecs()
        if c.kind is registry.Kind.SINGLE_BYTE
    )


def _any_repertoire() -> frozenset[str]:
    return _any_repertoire_at(registry.catalog_generation())


@lru_cache(maxsize=1)
def _any_repertoire_at(generation: int) -> frozenset[str]:
    out: set[str] = set()
    for r in _reencoders():
        out |= r.repertoire
    return frozenset(out)


def _units(text: str, r: _Reencoder):
    """Split ``text`` into maximal runs that re-encode under ``r`` to valid UTF-8.

    Yields segments as lists of ``(start, end, kind)`` units where kind is
    ``"id"`` (ASCII byte equal to the character), ``"single"`` (ASCII byte,
    different character -- only in ASCII-incompatible codecs) or ``"multi"``.
    """
    seg: list[tuple[int, int, str]] = []
    for m in _UTF8_UNIT.finditer(text.translate(r.byte_view)):
        kind = m.lastgroup
        if kind == "bad":
            if seg:
                yield seg
                seg = []
        elif kind == "ascii":
            i = m.start()
            seg.append((i, i + 1, "id" if m.group() == text[i] else "single"))
        else:
            seg.append((m.start(), m.end(), "multi"))
    if seg:
        yield seg


_NO_EVIDENCE = frozenset({"Cn", "Co", "Cs", "Cc"})


def _letterlike(ch: str) -> bool:
    return ch.isalpha() or unicodedata.category(ch)[0] == "M"


def _unit_strength(text: str, start: int, end: int, r: _Reencoder) -> int:
    """2 = strong evidence, 1 = weak, 0 = none.

    A unit that would decode to an emoji is always strong.  Units that look
    like ordinary letters in a natural case pattern are weak, and so is
    anything that would decode to an unassigned, private-use or control
    character never gets counted at all.
    """
    unit = text[start:end]
    if unit.isascii():
        return 0
    cp = ord(bytes(r.encode_map[ord(c)] for c in unit).decode("utf-8"))
    if is_emoji_codepoint(cp) or is_emoji_modifier(cp):
        return 2
    if unicodedata.category(chr(cp)) in _NO_EVIDENCE:
        return 0
    if all(_letterlike(c) for c in unit) and _natural_case(unit):
        return 1
    return 2


def _emoji_target(text: str, start: int, end: int, r: _Reencoder) -> bool:
    cp = ord(bytes(r.encode_map[ord(c)] for c in text[start:end]).decode("utf-8"))
    return is_emoji_codepoint(cp) or is_emoji_modifier(cp)


def _multi_runs(text: str, r: _Reencoder):
    """Pieces for an ASCII-compatible codec: runs of adjacent multi-byte units.

    ASCII is always an identity unit there and never part of a multi-byte
    unit, so adjacent units are exactly the pieces.
    """
    cur: list[tuple[int, int, str]] = []
    for s, e in r.multi_units(text):
        if cur and cur[-1][1] != s:
            yield cur
            cur = []
        cur.append((s, e, "multi"))
    if cur:
        yield cur


def _bridged_pieces(text: str, r: _Reencoder):
    for seg in _units(text, r):
        if not any(k == "multi" for _, _, k in seg):
            continue
        # split on identity runs; pieces without a multi unit bridge to a neighbour
        pieces: list[list[tuple[int, int, str]]] = [[]]
        for u in seg:
            if u[2] == "id":
                if pieces[-1]:
                    pieces.append([])
            else:
                pieces[-1].append(u)
        pieces = [p for p in pieces if p]
        merged: list[list[tuple[int, int, str]]] = []
        pending: list[tuple[int, int, str]] = []
        for p in pieces:
            if any(k == "multi" for _, _, k in p):
                merged.append(pending + p)
                pending = []
            elif merged and not pending:
                pending = p
            else:
                pending = pending + p
        if pending and merged:
            merged[-1] = merged[-1] + pending
        yield from merged


_C1_RE = re.compile(r"[\x80-\x9f]")
_NONASCII_RUN = re.compile(r"[^\x00-\x7f]+")


def _reencode_pieces(text: str, r: _Reencoder) -> list[tuple[int, int, bool]]:
    """Qualifying re-encodable pieces as ``(start, end, decodes_to_emoji)``."""
    has_c1 = _C1_RE.search(text) is not None
    candidates = []  # (start, end, best unit strength, has C1, decodes to emoji)
    strong_seen = False
    merged = _multi_runs(text, r) if r.ascii_compatible else _bridged_pieces(text, r)
    for p in merged:
        strength = max((_unit_strength(text, s, e, r) for s, e, k in p if k == "multi"), default=0)
        strong_seen |= strength == 2
        start, end = p[0][0], p[-1][1]
        piece_c1 = has_c1 and any(_is_c1(c) for c in text[start:end])
        emoji = any(_emoji_target(text, s, e, r) for s, e, k in p if k == "multi")
        candidates.append((start, end, strength, piece_c1, emoji))
    out = []
    for start, end, strength, piece_c1, emoji in candidates:
        if strength == 2 or (strength == 1 and strong_seen) or piece_c1:
            out.append((start, end, emoji))
    return out


def _reencode_flags(text: str) -> list[tuple[int, int, bool]]:
    nonascii = {c for c in text if c > "\x7f"}
    if not nonascii or not (nonascii & _any_repertoire()):
        return []
    regions = []
    runs = None
    has_c1 = any(_is_c1(c) for c in nonascii)
    for r in _reencoders():
        if not (nonascii & r.repertoire):
            continue
        if r.ascii_compatible:
            # every byte of a match is >= 0x80, i.e. a non-ASCII codepoint
            if runs is None:
                runs = "\x00".join(_NONASCII_RUN.findall(text))
            if not r.pattern.search(runs):
                continue
        elif has_c1:
            if not r.pattern.search(text):
                continue
        else:
            # ASCII letters are multi-byte material here, but an all-ASCII
            # unit is never evidence: only look further if some candidate
            # unit covers a non-ASCII codepoint.
            if not _covers_nonascii(text, r):
                continue
        regions.extend(_reencode_pieces(text, r))
    return regions



def _covers_nonascii(text: str, r: _Reencoder) -> bool:
    for s, e in r.multi_units(text):
        if not text[s:e].isascii():
            try:
                if _unit_strength(text, s, e, r):
                    return True
            except UnicodeDecodeError:
                return True
    return False


# -- feature extraction ----------------------------------------------------

def _flags(text: str) -> list[set[str] | None]:
    """Per-codepoint feature sets (None when unflagged).

    Codepoints of a re-encodable piece that decodes to an emoji also carry
    the internal marker ``_EMOJI_EVIDENCE``.
    """
    n = len(text)
    flags: list[set[str] | None] = [None] * n

    def mark(i, feature):
        if flags[i] is None:
            flags[i] = set()
        flags[i].add(feature)

    for i, ch in enumerate(text):
        if ch <= "\x7f":
            continue
        if _is_c1(ch):
            mark(i, C1_CONTROL)
        elif ch == "�":
            mark(i, REPLACEMENT_CHAR)
        elif ch in LEAD_CHARS and i + 1 < n and _lead_follower(text[i + 1]):
            mark(i, LEAD_SIGNATURE)
            mark(i + 1, LEAD_SIGNATURE)
    for start, end, emoji in _reencode_flags(text):
        for i in range(start, end):
            mark(i, UTF8_REENCODE)
            if emoji:
                mark(i, _EMOJI_EVIDENCE)
    return flags


def _latin1_dense(segment: str) -> bool:
    if not segment:
        return False
    return sum(1 for c in segment if _is_latin1_symbol(c)) > LATIN1_DENSITY_LIMIT * len(segment)


def _word_exempt(text: str, start: int, end: int) -> bool:
    """A run inside an ordinary Latin word with at most one accented letter."""
    while start > 0 and text[start - 1].isalpha():
        start -= 1
    while end < len(text) and text[end].isalpha():
        end += 1
    word = text[start:end]
    if not all(_is_latin_letter(c) for c in word):
        return False
    return sum(1 for c in word if not c.isascii()) <= 1


@lru_cache(maxsize=65536)
def _suspicion(text: str, config: DetectorConfig, generation: int = 0) -> float:
    if text.isascii():
        return 0.0
    triggers: set[str] = set()
    for f in _flags(text):
        if f:
            triggers |= f
    triggers.discard(_EMOJI_EVIDENCE)
    if _latin1_dense(text):
        triggers.add(LATIN1_DENSITY)
    return config.score(triggers)


def suspicion_score(text: str, config: DetectorConfig | None = None) -> float:
    """Aggregate mojibake score of ``text`` in [0, 1]; 0 for pure ASCII."""
    return _suspicion(text, config or DEFAULT_CONFIG, registry.catalog_generation())


@lru_cache(maxsize=65536)
def _structural(text: str, config: DetectorConfig, generation: int = 0) -> float:
    if text.isascii():
        return 0.0
    triggers: set[str] = set()
    for f in _flags(text):
        if f:
            triggers |= f
    triggers.discard(_EMOJI_EVIDENCE)
    return config.score(triggers)


def structural_suspicion(text: str, config: DetectorConfig | None = None) -> float:
    """Like :func:`suspicion_score` but without the Latin-1 density feature.

    Density is a statement about a whole text; on a two-character repair
    output such as "¯" it fires for no reason, so repair candidates are
    judged on the structural features only.
    """
    return _structural(text, config or DEFAULT_CONFIG, registry.catalog_generation())


def _extendable(ch: str) -> bool:
    return ch > "\x7f" and not is_emoji_codepoint(ch) and not is_emoji_modifier(ch)


def detect_spans(text: str, config: DetectorConfig | None = None) -> list[GibberishSpan]:
    """Maximal suspicious runs whose local score reaches the threshold.

    A run is made of flagged codepoints plus any contiguous non-ASCII,
    non-emoji neighbours.  Offsets are codepoint offsets.
    """
    config = config or DEFAULT_CONFIG
    if text.isascii():
        return []
    flags = _flags(text)
    if not any(flags):
        return []
    n = len(text)
    spans = []
    i = 0
    while i < n:
        if not (flags[i] or _extendable(text[i])):
            i += 1
            continue
        j = i
        triggers: set[str] = set()
        while j < n and (flags[j] or _extendable(text[j])):
            if flags[j]:
                triggers |= flags[j]
            j += 1
        if triggers:
            exempt = _EMOJI_EVIDENCE not in triggers and _word_exempt(text, i, j)
            triggers.discard(_EMOJI_EVIDENCE)
            if _latin1_dense(text[i:j]):
                triggers.add(LATIN1_DENSITY)
            score = 0.0 if exempt else config.score(triggers)
            if score >= config.threshold and score > 0:
                spans.append(GibberishSpan(i, j, score, frozenset(triggers)))
        i = j
    return spans
