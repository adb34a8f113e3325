"""Brute-force the transcode chain behind a mojibake span and reverse it.

A chain ``(file_encoding, source_encoding)`` says: the original text was
encoded with ``source_encoding`` and the bytes were then read back with
``file_encoding``.  Repairing a span means encoding it with the file encoding
and decoding the result with the source encoding.  Every candidate chain is
tried in a fixed priority order and the best-scoring viable one wins.

Scoring (higher is better)::

    3 * emoji codepoints gained
    + 2 * drop in suspicion score
    - 5 * U+FFFD introduced
    - 3 * C1 controls introduced
    - 1 * printable ASCII characters lost

A candidate qualifies only with a positive score and when its output either
contains an emoji codepoint or (for UTF-8 sources) no longer looks suspicious
at all.  Undoing
mojibake never lengthens text (several codepoints collapse into one), so a
candidate longer than its span is never considered; this rules out chains such
as ``utf_7->utf_8`` that turn anything into plausible-looking ASCII.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from . import registry
from .detector import DetectorConfig, GibberishSpan, detect_spans, structural_suspicion, suspicion_score
from .emojis import count_emoji_codepoints, is_emoji_codepoint, is_emoji_modifier, is_emoji_only
from .registry import CodecId, Kind

W_EMOJI = 3.0
W_SUSPICION = 2.0
W_FFFD = 5.0
W_C1 = 3.0
W_ASCII = 1.0

MAX_SHRINK = 2
CORPUS_CHAIN_SHARE = 0.9


@dataclass(frozen=True, order=True)
class TranscodeChain:
    file_encoding: str
    source_encoding: str

    def __post_init__(self):
        object.__setattr__(self, "file_encoding", registry.get_codec(self.file_encoding).name)
        object.__setattr__(self, "source_encoding", registry.get_codec(self.source_encoding).name)

    @classmethod
    def parse(cls, spec: str) -> TranscodeChain:
        """Parse ``"cp1252->utf_8"`` (file encoding first)."""
        parts = spec.split("->")
        if len(parts) != 2 or not all(p.strip() for p in parts):
            raise ValueError(f"chain must look like FILE->SOURCE, got {spec!r}")
        try:
            return cls(parts[0].strip(), parts[1].strip())
        except LookupError as exc:
            raise ValueError(str(exc)) from None

    @property
    def is_identity(self) -> bool:
        return self.file_encoding == self.source_encoding

    def __str__(self) -> str:
        return f"{self.file_encoding}->{self.source_encoding}"


@dataclass(frozen=True)
class RepairCandidate:
    chain: TranscodeChain
    repaired: str
    score: float
    emoji_gain: int
    fffd_count: int
    residual_suspicion: float


@dataclass(frozen=True)
class SpanRepair:
    span: GibberishSpan
    chain: TranscodeChain
    before: str
    after: str


@dataclass(frozen=True)
class RepairResult:
    original_text: str
    repaired_text: str
    span_repairs: tuple[SpanRepair, ...] = ()
    unrepaired: tuple[GibberishSpan, ...] = ()
    corpus_chain: TranscodeChain | None = None

    @property
    def changed(self) -> bool:
        return self.repaired_text != self.original_text

    @property
    def emoji_gain(self) -> int:
        return count_emoji_codepoints(self.repaired_text) - count_emoji_codepoints(self.original_text)


# -- chain enumeration -----------------------------------------------------

def _file_rank(codecs: Sequence[CodecId]) -> dict[str, int]:
    top = {n: i for i, n in enumerate(registry.FILE_PRIORITY)}
    kind_order = {Kind.SINGLE_BYTE: 0, Kind.UTF_FAMILY: 1, Kind.MULTI_BYTE: 2}
    catalog = {c.name: i for i, c in enumerate(registry.list_codecs(multibyte=True))}

    def key(c: CodecId):
        if c.name in top:
            return (0, top[c.name], "")
        if c.kind is Kind.SINGLE_BYTE:
            return (1, 0, c.name)
        return (1 + kind_order[c.kind], catalog.get(c.name, 0), c.name)

    return {c.name: i for i, c in enumerate(sorted(codecs, key=key))}


def _source_rank(codecs: Sequence[CodecId]) -> dict[str, int]:
    top = {n: i for i, n in enumerate(registry.SOURCE_PRIORITY)}
    order = sorted(range(len(codecs)), key=lambda i: (top.get(codecs[i].name, len(top)), i))
    return {codecs[i].name: r for r, i in enumerate(order)}


def enumerate_chains(codecs: Iterable[CodecId | str] | None = None) -> list[TranscodeChain]:
    """All ``(file, source)`` pairs with file != source, most likely first.

    Source encodings are ranked UTF-8 first, then UTF-16/32 LE/BE, then the
    remaining codecs in their given order; file encodings follow the registry
    priority (common code pages, other single-byte, UTF, multi-byte).
    """
    if codecs is None:
        return list(_default_chains(False))
    cs = list(dict.fromkeys(registry.get_codec(c) for c in codecs))
    fr, sr = _file_rank(cs), _source_rank(cs)
    pairs = [(s, f) for s in cs for f in cs if f != s]
    pairs.sort(key=lambda p: (sr[p[0].name], fr[p[1].name]))
    return [TranscodeChain(f.name, s.name) for s, f in pairs]


def _default_chains(multibyte: bool) -> tuple[TranscodeChain, ...]:
    return _chains_at(multibyte, registry.catalog_generation())


@lru_cache(maxsize=4)
def _chains_at(multibyte: bool, generation: int) -> tuple[TranscodeChain, ...]:
    return tuple(enumerate_chains(registry.list_codecs(multibyte=multibyte)))


def default_chains(multibyte: bool = False) -> list[TranscodeChain]:
    return list(_default_chains(multibyte))


# -- scoring ---------------------------------------------------------------

_C1 = re.compile("[\x80-\x9f]")
_NON_PRINTABLE = bytes(range(0x20)) + b"\x7f"


def _count_c1(text: str) -> int:
    return len(_C1.findall(text))


def _count_printable_ascii(text: str) -> int:
    return len(text.encode("ascii", "ignore").translate(None, _NON_PRINTABLE))


@dataclass(frozen=True)
class _Baseline:
    text: str
    emoji: int
    suspicion: float
    fffd: int
    c1: int
    ascii: int

    @classmethod
    def of(cls, text: str, config: DetectorConfig | None, suspicion: float | None = None) -> _Baseline:
        if suspicion is None:
            suspicion = suspicion_score(text, config)
        return cls(text, count_emoji_codepoints(text), suspicion,
                   text.count("�"), _count_c1(text), _count_printable_ascii(text))


def _penalties(base: _Baseline, repaired: str) -> tuple[int, int, float]:
    fffd = repaired.count("�")
    penalty = (W_FFFD * max(0, fffd - base.fffd)
               + W_C1 * max(0, _count_c1(repaired) - base.c1)
               + W_ASCII * max(0, base.ascii - _count_printable_ascii(repaired)))
    return count_emoji_codepoints(repaired) - base.emoji, fffd, penalty


def score_candidate(before: str, candidate: RepairCandidate | str,
                    config: DetectorConfig | None = None) -> float:
    """Score of replacing ``before`` by the candidate's repaired text."""
    repaired = candidate if isinstance(candidate, str) else candidate.repaired
    if repaired == before:
        return 0.0
    base = _Baseline.of(before, config)
    gain, _, penalty = _penalties(base, repaired)
    drop = base.suspicion - structural_suspicion(repaired, config)
    return W_EMOJI * gain + W_SUSPICION * drop - penalty


def _build(chain: TranscodeChain, base: _Baseline, repaired: str, config) -> RepairCandidate:
    gain, fffd, penalty = _penalties(base, repaired)
    residual = structural_suspicion(repaired, config)
    if repaired == base.text:
        score = 0.0
    else:
        score = W_EMOJI * gain + W_SUSPICION * (base.suspicion - residual) - penalty
    return RepairCandidate(chain, repaired, score, gain, fffd, residual)


def _shrink(lo: int, hi: int, pos: int) -> tuple[int, int] | None:
    """Drop the offending boundary codepoint, if the failure sits on one."""
    if hi - lo <= 1:
        return None
    if pos <= lo:
        return lo + 1, hi
    if pos >= hi - 1:
        return lo, hi - 1
    return None


class _ChainRunner:
    """Applies chains to one span, caching encodes per file codec."""

    def __init__(self, text: str):
        self.text = text
        self._encoded: dict[tuple[str, int, int], bytes | int] = {}

    def _encode(self, codec: str, lo: int, hi: int) -> bytes | int:
        """Encoded bytes, or the offset of the first unencodable codepoint."""
        key = (codec, lo, hi)
        hit = self._encoded.get(key)
        if hit is None:
            try:
                hit = registry.strict_encoder(codec)(self.text[lo:hi])
            except UnicodeError as exc:
                hit = getattr(exc, "start", 0)
            self._encoded[key] = hit
        return hit

    def run(self, chain: TranscodeChain) -> str | None:
        """Repaired span text, or None when the chain is not viable."""
        lo, hi = 0, len(self.text)
        for _ in range(MAX_SHRINK + 1):
            data = self._encode(chain.file_encoding, lo, hi)
            if isinstance(data, int):
                pos = lo + data
            else:
                try:
                    out = registry.strict_decoder(chain.source_encoding)(data)
                except UnicodeError as exc:
                    if len(data) != hi - lo:
                        return None  # byte offsets only map to codepoints 1:1 here
                    pos = lo + min(getattr(exc, "start", 0), hi - lo - 1)
                else:
                    return self.text[:lo] + out + self.text[hi:]
            bounds = _shrink(lo, hi, pos)
            if bounds is None:
                return None
            lo, hi = bounds
        return None


def apply_chain(span_text: str, chain: TranscodeChain,
                config: DetectorConfig | None = None) -> RepairCandidate | None:
    """Transcode ``span_text`` through ``chain`` (strict); None if not viable."""
    repaired = _ChainRunner(span_text).run(chain)
    if repaired is None:
        return None
    return _build(chain, _Baseline.of(span_text, config), repaired, config)


# Only these sources may qualify on "no longer suspicious" alone; UTF-16/32
# decode nearly any even-length byte string into clean-looking CJK.
_PLAIN_TEXT_SOURCES = frozenset({"utf_8", "utf_8_sig"})


def _emoji_material(text: str) -> int:
    """Emoji codepoints plus modifiers; breaks score ties (``☀️`` over ``☀／``)."""
    return sum(1 for c in text if is_emoji_codepoint(c) or is_emoji_modifier(c))


def _qualifies(c: RepairCandidate) -> bool:
    if c.score <= 0:
        return False
    if count_emoji_codepoints(c.repaired) > 0:
        return True
    return c.residual_suspicion == 0 and c.chain.source_encoding in _PLAIN_TEXT_SOURCES


class _TextFit:
    """Whether a chain can undo a whole text, not just one span.

    When a file was misread through one chain, that chain transcodes the entire
    text strictly and leaves the plain ASCII around the mojibake alone.  Chains
    that would mangle that context (EBCDIC readings, UTF-16 byte swaps) are
    only used when no fitting chain repairs a span.
    """

    def __init__(self, text: str):
        self.text = text
        self.ascii = _count_printable_ascii(text)
        self._encoded: dict[str, bytes | None] = {}
        self._fits: dict[TranscodeChain, bool] = {}

    def __call__(self, chain: TranscodeChain) -> bool:
        ok = self._fits.get(chain)
        if ok is not None:
            return ok
        if chain.file_encoding not in self._encoded:
            try:
                self._encoded[chain.file_encoding] = registry.strict_encoder(chain.file_encoding)(self.text)
            except UnicodeError:
                self._encoded[chain.file_encoding] = None
        data = self._encoded[chain.file_encoding]
        ok = False
        if data is not None:
            try:
                whole = registry.strict_decoder(chain.source_encoding)(data)
                ok = _count_printable_ascii(whole) >= self.ascii
            except UnicodeError:
                pass
        self._fits[chain] = ok
        return ok


def _better(cand: RepairCandidate, best: RepairCandidate | None) -> bool:
    if best is None:
        return True
    return (cand.score, _emoji_material(cand.repaired)) > (best.score, _emoji_material(best.repaired))


def _search(span_text: str, chains: Sequence[TranscodeChain], config,
            suspicion: float | None, fit=None) -> RepairCandidate | None:
    base = _Baseline.of(span_text, config, suspicion)
    runner = _ChainRunner(span_text)
    top_source = registry.SOURCE_PRIORITY[0]
    best: list[RepairCandidate | None] = [None, None]  # [fitting, other]
    seen: set[tuple[int, str]] = set()
    for chain in chains:
        if chain.is_identity:
            continue
        repaired = runner.run(chain)
        if repaired is None or repaired == span_text or len(repaired) > len(span_text):
            continue
        tier = 0 if fit is None or fit(chain) else 1
        if (tier, repaired) in seen:
            continue  # same output as an earlier chain in this tier: it cannot win
        seen.add((tier, repaired))
        gain, _, penalty = _penalties(base, repaired)
        bound = W_EMOJI * gain + W_SUSPICION * base.suspicion - penalty
        if bound <= 0 or (best[tier] is not None and bound < best[tier].score):
            continue
        cand = _build(chain, base, repaired, config)
        if not _qualifies(cand):
            continue
        if _better(cand, best[tier]):
            best[tier] = cand
        if tier == 0 and chain.source_encoding == top_source and is_emoji_only(repaired):
            break
    return best[0] if best[0] is not None else best[1]


def repair_span(span_text: str, chains: Sequence[TranscodeChain] | None = None,
                config: DetectorConfig | None = None,
                suspicion: float | None = None) -> RepairCandidate | None:
    """Best qualifying candidate over ``chains``.

    Ties on score go to the output with more emoji material, then to the
    earlier chain.  ``suspicion`` is the span's score as seen in its full text
    (detection uses evidence from the whole text); by default the span is
    scored alone.
    """
    chains = _default_chains(False) if chains is None else chains
    return _search(span_text, chains, config, suspicion)


# -- whole texts -----------------------------------------------------------

def _resolve_chains(chains, pinned, multibyte) -> Sequence[TranscodeChain]:
    if pinned is not None:
        return (pinned if isinstance(pinned, TranscodeChain) else TranscodeChain.parse(pinned),)
    if chains is None:
        return _default_chains(multibyte)
    return chains


def _single_pass(text: str, config, chains) -> tuple[str, list[SpanRepair], list[GibberishSpan]]:
    spans = detect_spans(text, config)
    if not spans:
        return text, [], []
    fit = _TextFit(text) if len(chains) > 1 else None
    pieces, repairs, unrepaired = [], [], []
    cursor = 0
    for span in spans:
        before = span.slice(text)
        cand = _search(before, chains, config, span.score, fit)
        pieces.append(text[cursor:span.start])
        if cand is None:
            unrepaired.append(span)
            pieces.append(before)
        else:
            repairs.append(SpanRepair(span, cand.chain, before, cand.repaired))
            pieces.append(cand.repaired)
        cursor = span.end
    pieces.append(text[cursor:])
    return "".join(pieces), repairs, unrepaired


def _double_repair(span_text: str, chains, config) -> tuple[str, TranscodeChain] | None:
    """Undo two stacked UTF-8 misreadings: first peel one layer, then search."""
    top_source = registry.SOURCE_PRIORITY[0]
    base_susp = suspicion_score(span_text, config)
    tried = set()
    for first in chains:
        if first.source_encoding != top_source or first.is_identity:
            continue
        inner = _ChainRunner(span_text).run(first)
        if inner is None or inner == span_text or inner in tried:
            continue
        tried.add(inner)
        if suspicion_score(inner, config) == 0 and base_susp > 0:
            continue  # a one-layer repair would already have taken this
        cand = repair_span(inner, chains, config)
        if cand is not None and count_emoji_codepoints(cand.repaired) > 0:
            return cand.repaired, cand.chain
    return None


def repair_text(text: str, detector_config: DetectorConfig | None = None,
                chains: Sequence[TranscodeChain] | None = None, *,
                pinned: TranscodeChain | str | None = None, depth: int = 1,
                multibyte: bool = False) -> RepairResult:
    """Detect mojibake spans and replace each with its best repair.

    Codepoints outside detected spans are never touched.  ``pinned`` restricts
    the search to one chain; ``depth=2`` also tries to undo double mojibake
    in spans a single chain cannot fix.
    """
    if depth not in (1, 2):
        raise ValueError("depth must be 1 or 2")
    chain_list = _resolve_chains(chains, pinned, multibyte)
    if text.isascii():
        return RepairResult(text, text)
    out, repairs, unrepaired = _single_pass(text, detector_config, chain_list)
    if depth == 2 and unrepaired:
        pieces, cursor, still = [], 0, []
        # unrepaired spans were not substituted; shift them past earlier repairs
        offsets = [(r.span.start, len(r.after) - len(r.before)) for r in repairs]
        for span in unrepaired:
            shift = sum(d for s, d in offsets if s < span.start)
            start, end = span.start + shift, span.end + shift
            fixed = _double_repair(out[start:end], chain_list, detector_config)
            pieces.append(out[cursor:start])
            if fixed is None:
                still.append(span)
                pieces.append(out[start:end])
            else:
                pieces.append(fixed[0])
                repairs.append(SpanRepair(span, fixed[1], out[start:end], fixed[0]))
            cursor = end
        pieces.append(out[cursor:])
        out, unrepaired = "".join(pieces), still
        repairs.sort(key=lambda r: r.span.start)
    return RepairResult(text, out, tuple(repairs), tuple(unrepaired),
                        chain_list[0] if pinned is not None else None)


def infer_corpus_chain(records: Iterable[str], detector_config: DetectorConfig | None = None,
                       chains: Sequence[TranscodeChain] | None = None,
                       share: float = CORPUS_CHAIN_SHARE) -> TranscodeChain | None:
    """The chain behind at least ``share`` of all repaired spans, if any."""
    votes: Counter[TranscodeChain] = Counter()
    first_seen: dict[TranscodeChain, int] = {}
    for text in records:
        for rep in repair_text(text, detector_config, chains).span_repairs:
            votes[rep.chain] += 1
            first_seen.setdefault(rep.chain, len(first_seen))
    total = sum(votes.values())
    if not total:
        return None
    chain, n = min(votes.items(), key=lambda kv: (-kv[1], first_seen[kv[0]]))
    return chain if n >= share * total else None
