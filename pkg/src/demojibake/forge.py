"""Manufacture mojibake with a known chain, for testing repair end to end.

``corrupt`` encodes clean text with the chain's source encoding and decodes
the bytes with its file encoding, the exact inverse of a repair.  The cause
tag only documents which real-world scenario a corruption stands for; all
three do the same thing to the bytes.

Manifest format (tab separated, one record per line)::

    record-id<TAB>FILE->SOURCE<TAB>true|false
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, TextIO

from . import registry
from .registry import CodecError, Policy
from .repair import TranscodeChain


class Cause(str, enum.Enum):
    WRONG_DECODE = "wrong_decode"
    APP_DEFAULT_MISMATCH = "app_default_mismatch"
    WRONG_STORAGE_CODEC = "wrong_storage_codec"


@dataclass(frozen=True)
class CorruptionSpec:
    chain: TranscodeChain
    cause: Cause = Cause.WRONG_DECODE
    policy: Policy = Policy.STRICT

    @classmethod
    def of(cls, chain: str | TranscodeChain, cause: Cause | str = Cause.WRONG_DECODE,
           policy: Policy | str = Policy.STRICT) -> CorruptionSpec:
        if isinstance(chain, str):
            chain = TranscodeChain.parse(chain)
        return cls(chain, Cause(cause), Policy(policy))


def _as_spec(spec) -> CorruptionSpec:
    if isinstance(spec, CorruptionSpec):
        return spec
    return CorruptionSpec.of(spec)


def corrupt(text: str, spec: CorruptionSpec | TranscodeChain | str) -> tuple[str, bool]:
    """Garble ``text``; returns ``(garbled, lossless)``.

    Raises :class:`CodecError` under the strict policy when the text cannot be
    encoded with the source encoding or the bytes cannot be decoded with the
    file encoding.
    """
    spec = _as_spec(spec)
    chain = spec.chain
    data, s1 = registry.encode_text(text, chain.source_encoding, spec.policy)
    garbled, s2 = registry.decode_bytes(data, chain.file_encoding, spec.policy)
    clean = s1 is registry.Status.CLEAN and s2 is registry.Status.CLEAN
    return garbled, clean and _round_trips(garbled, text, chain)


def _round_trips(garbled: str, text: str, chain: TranscodeChain) -> bool:
    try:
        back, _ = registry.transcode(garbled, chain.file_encoding, chain.source_encoding)
    except CodecError:
        return False
    return back == text


def is_lossless(text: str, chain: TranscodeChain | str) -> bool:
    """True when strict corruption succeeds and a repair restores ``text`` exactly."""
    try:
        return corrupt(text, CorruptionSpec.of(chain))[1]
    except CodecError:
        return False


@dataclass(frozen=True)
class ManifestEntry:
    record_id: str
    chain: TranscodeChain
    lossless: bool

    def to_line(self) -> str:
        return f"{self.record_id}\t{self.chain}\t{'true' if self.lossless else 'false'}"

    @classmethod
    def from_line(cls, line: str) -> ManifestEntry:
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 3 or parts[2] not in ("true", "false"):
            raise ValueError(f"bad manifest line: {line!r}")
        return cls(parts[0], TranscodeChain.parse(parts[1]), parts[2] == "true")


@dataclass(frozen=True)
class ForgedRecord:
    record_id: str
    text: str
    picked: bool
    lossless: bool


def _pick(seed: int | str, record_id: str, rate: float) -> bool:
    if rate >= 1.0:
        return True
    if rate <= 0.0:
        return False
    return random.Random(f"{seed}:{record_id}").random() < rate


def forge_records(records: Iterable[tuple[str, str]], spec: CorruptionSpec | TranscodeChain | str,
                  rate: float = 1.0, seed: int | str = 0) -> Iterator[ForgedRecord]:
    """Corrupt a stream of ``(id, text)`` pairs.

    Each record is picked with probability ``rate`` from a generator seeded by
    ``seed`` and the record id, so the outcome does not depend on order or on
    how records are split between workers.  Under the strict policy a record
    that cannot be corrupted is passed through unchanged with
    ``lossless=False``.
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError("rate must be in [0, 1]")
    spec = _as_spec(spec)
    for record_id, text in records:
        if not _pick(seed, record_id, rate):
            yield ForgedRecord(record_id, text, False, False)
            continue
        try:
            garbled, lossless = corrupt(text, spec)
        except CodecError:
            yield ForgedRecord(record_id, text, True, False)
            continue
        yield ForgedRecord(record_id, garbled, True, lossless)


def forge_corpus(records: Iterable[tuple[str, str]], spec: CorruptionSpec | TranscodeChain | str,
                 rate: float = 1.0, seed: int | str = 0) -> tuple[list[tuple[str, str]], list[ManifestEntry]]:
    """Corrupted ``(id, text)`` records plus a manifest of the picked ones."""
    spec = _as_spec(spec)
    out, manifest = [], []
    for rec in forge_records(records, spec, rate, seed):
        out.append((rec.record_id, rec.text))
        if rec.picked:
            manifest.append(ManifestEntry(rec.record_id, spec.chain, rec.lossless))
    return out, manifest


def write_manifest(entries: Iterable[ManifestEntry], dest: str | Path | TextIO) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            write_manifest(entries, fh)
        return
    for e in entries:
        dest.write(e.to_line() + "\n")


def read_manifest(source: str | Path | TextIO) -> list[ManifestEntry]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return read_manifest(fh)
    return [ManifestEntry.from_line(line) for line in source if line.strip()]
