"""Batch driver: ingest a corpus, repair it, and report before/after metrics.

Records are read lazily, processed in fixed-size batches (optionally by a pool
of worker processes) and folded into the report strictly in input order, so
the report is identical for any worker count and memory stays bounded by the
number of batches in flight.
"""

from __future__ import annotations

import configparser
import csv
import enum
import json
import logging
import multiprocessing
import os
from collections import Counter, deque
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence, TextIO

from .detector import FEATURES, DetectorConfig
from .emojis import FrequencyTable, extract_emojis
from .readability import MS_PER_CHAR, ReadabilityReport, readability_report
from .repair import TranscodeChain, infer_corpus_chain, repair_text

log = logging.getLogger(__name__)

FORMATS = ("csv", "jsonl", "txt")
DEFAULT_BOUNDS = (71, 141, 211)


class IngestError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class ConfigError(ValueError):
    """Invalid pipeline configuration (bad key, value or chain)."""


@dataclass(frozen=True)
class CorpusRecord:
    id: str
    text: str
    line: int = 0
    fields: Mapping[str, Any] | None = None

    @property
    def length(self) -> int:
        return len(self.text)


class LengthGroup(str, enum.Enum):
    G1 = "G1"
    G2 = "G2"
    G3 = "G3"
    G4 = "G4"


def assign_group(record: CorpusRecord | str | int, bounds: Sequence[int] = DEFAULT_BOUNDS) -> LengthGroup:
    """G1 below ``bounds[0]``, G2 below ``bounds[1]``, G3 below ``bounds[2]``, else G4."""
    if isinstance(record, CorpusRecord):
        n = record.length
    elif isinstance(record, str):
        n = len(record)
    else:
        n = record
    for group, upper in zip((LengthGroup.G1, LengthGroup.G2, LengthGroup.G3), bounds):
        if n < upper:
            return group
    return LengthGroup.G4


def parse_bounds(spec: str | Sequence[int]) -> tuple[int, int, int]:
    try:
        values = tuple(int(x) for x in (spec.split(",") if isinstance(spec, str) else spec))
    except ValueError:
        raise ConfigError(f"group bounds must be three integers, got {spec!r}") from None
    if len(values) != 3 or not 0 < values[0] < values[1] < values[2]:
        raise ConfigError(f"group bounds must be three increasing positive integers, got {spec!r}")
    return values


# -- ingest ----------------------------------------------------------------

def detect_format(path: str | Path) -> str:
    suffix = Path(path).suffix.lower().lstrip(".")
    if suffix == "csv":
        return "csv"
    if suffix in ("jsonl", "ndjson"):
        return "jsonl"
    return "txt"


def _open_text(path: str | Path, input_encoding: str | None) -> TextIO:
    # Mojibake usually arrives as valid UTF-8 that spells the wrong characters;
    # --input-encoding covers files whose raw bytes are in some other codec.
    return open(path, encoding=input_encoding or "utf-8", errors="replace", newline="")


def iter_records(path: str | Path, fmt: str | None = None, text_field: str = "text",
                 id_field: str = "id", input_encoding: str | None = None) -> Iterator[CorpusRecord | IngestError]:
    """Yield records, or an :class:`IngestError` in place of each bad row."""
    fmt = fmt or detect_format(path)
    if fmt not in FORMATS:
        raise ConfigError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
    with _open_text(path, input_encoding) as fh:
        if fmt == "txt":
            for n, line in enumerate(fh, 1):
                yield CorpusRecord(str(n), line.rstrip("\r\n"), n)
        elif fmt == "jsonl":
            yield from _iter_jsonl(fh, text_field, id_field)
        else:
            yield from _iter_csv(fh, text_field, id_field)


def _iter_jsonl(fh, text_field, id_field):
    for n, line in enumerate(fh, 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            yield IngestError(n, f"invalid JSON ({exc.msg})")
            continue
        if not isinstance(obj, dict):
            yield IngestError(n, "expected a JSON object")
            continue
        if not isinstance(obj.get(text_field), str):
            yield IngestError(n, f"missing text field {text_field!r}")
            continue
        rid = obj.get(id_field, n)
        yield CorpusRecord(str(rid), obj[text_field], n, obj)


def _iter_csv(fh, text_field, id_field):
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        return
    except csv.Error as exc:
        yield IngestError(1, f"malformed CSV header ({exc})")
        return
    if text_field not in header:
        yield IngestError(1, f"missing text field {text_field!r} in header")
        return
    width = len(header)
    while True:
        try:
            row = next(reader)
        except StopIteration:
            return
        except csv.Error as exc:
            yield IngestError(reader.line_num, f"malformed CSV row ({exc})")
            continue
        n = reader.line_num
        if not row:
            continue
        if len(row) != width:
            yield IngestError(n, f"expected {width} fields, found {len(row)}")
            continue
        fields = dict(zip(header, row))
        rid = fields.get(id_field, str(n - 1))
        yield CorpusRecord(str(rid), fields[text_field], n, fields)


def ingest(path: str | Path, fmt: str | None = None, text_field: str = "text",
           id_field: str = "id", input_encoding: str | None = None) -> Iterator[CorpusRecord]:
    """Stream records; raises :class:`IngestError` on the first bad row."""
    for item in iter_records(path, fmt, text_field, id_field, input_encoding):
        if isinstance(item, IngestError):
            raise item
        yield item


class RecordWriter:
    """Writes records back in their input format with the text replaced."""

    def __init__(self, out: TextIO, fmt: str, text_field: str = "text"):
        self.out, self.fmt, self.text_field = out, fmt, text_field
        self._csv: csv.DictWriter | None = None

    def write(self, record: CorpusRecord, text: str) -> None:
        if self.fmt == "txt":
            self.out.write(text + "\n")
        elif self.fmt == "jsonl":
            obj = dict(record.fields or {"id": record.id})
            obj[self.text_field] = text
            self.out.write(json.dumps(obj, ensure_ascii=False) + "\n")
        else:
            fields = dict(record.fields or {"id": record.id})
            fields[self.text_field] = text
            if self._csv is None:
                self._csv = csv.DictWriter(self.out, fieldnames=list(fields))
                self._csv.writeheader()
            self._csv.writerow(fields)


# -- configuration ---------------------------------------------------------

@dataclass(frozen=True)
class PipelineConfig:
    format: str | None = None
    text_field: str = "text"
    id_field: str = "id"
    input_encoding: str | None = None
    repair: bool = True
    chain: TranscodeChain | None = None
    infer_chain: bool = False
    infer_sample: int = 200
    depth: int = 1
    multibyte: bool = False
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    group_bounds: tuple[int, int, int] = DEFAULT_BOUNDS
    emoji_mode: str = "codepoint"
    top_n: int = 40
    ms_per_char: float = MS_PER_CHAR
    workers: int = 1
    batch_size: int = 500

    def __post_init__(self):
        if self.format is not None and self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")
        if self.emoji_mode not in ("codepoint", "cluster"):
            raise ConfigError("emoji_mode must be 'codepoint' or 'cluster'")
        if self.depth not in (1, 2):
            raise ConfigError("depth must be 1 or 2")
        if self.workers < 1 or self.batch_size < 1 or self.top_n < 0:
            raise ConfigError("workers and batch_size must be >= 1, top_n >= 0")
        parse_bounds(self.group_bounds)


def _as_bool(value: str) -> bool:
    v = value.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {value!r}")


def parse_chain(spec: str) -> TranscodeChain:
    try:
        return TranscodeChain.parse(spec)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


_CONFIG_KEYS = {
    "format": str, "text_field": str, "id_field": str, "input_encoding": str,
    "chain": parse_chain, "infer_chain": _as_bool, "infer_sample": int, "depth": int,
    "multibyte": _as_bool, "group_bounds": parse_bounds, "emoji_mode": str, "top_n": int,
    "ms_per_char": float, "workers": int, "batch_size": int, "repair": _as_bool,
}


def read_config_file(path: str | Path) -> dict[str, str]:
    """Read a ``key = value`` file (``#`` comments) into a flat dict."""
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    try:
        text = Path(path).read_text(encoding="utf-8")
        parser.read_string("[demojibake]\n" + text, source=str(path))
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return dict(parser["demojibake"])


def config_from_mapping(values: Mapping[str, str], base: PipelineConfig | None = None) -> PipelineConfig:
    """Apply string settings (from a config file or CLI) on top of ``base``.

    Detector settings are ``threshold`` and ``weight.<feature>``.
    """
    base = base or PipelineConfig()
    updates: dict[str, Any] = {}
    threshold = base.detector.threshold
    weights = dict(base.detector.weights)
    for key, raw in values.items():
        key = key.strip().lower().replace("-", "_")
        try:
            if key == "threshold":
                threshold = float(raw)
            elif key.startswith("weight."):
                feature = key.split(".", 1)[1]
                if feature not in FEATURES:
                    raise ConfigError(f"unknown detector feature {feature!r}")
                weights[feature] = float(raw)
            elif key in _CONFIG_KEYS:
                updates[key] = _CONFIG_KEYS[key](raw)
            else:
                raise ConfigError(f"unknown config key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad value for {key}: {raw!r}") from None
    try:
        updates["detector"] = DetectorConfig(threshold, weights)
        return replace(base, **updates)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


# -- per-record work -------------------------------------------------------

@dataclass(frozen=True)
class RecordOutcome:
    id: str
    group: LengthGroup
    before: ReadabilityReport
    after: ReadabilityReport
    text: str
    gibberish: bool
    repaired_spans: int
    unrepaired_spans: int
    emoji_gain: int
    emoji_counts: tuple[tuple[str, int], ...]
    chains: tuple[str, ...] = ()


def process_text(record_id: str, text: str, config: PipelineConfig) -> RecordOutcome:
    before = readability_report(text, config.ms_per_char)
    group = assign_group(len(text), config.group_bounds)
    out_text, gibberish, n_rep, n_unrep, gain, chains = text, False, 0, 0, 0, ()
    if config.repair:
        result = repair_text(text, config.detector, pinned=config.chain, depth=config.depth,
                             multibyte=config.multibyte)
        out_text = result.repaired_text
        n_rep, n_unrep = len(result.span_repairs), len(result.unrepaired)
        gibberish = bool(n_rep or n_unrep)
        gain = result.emoji_gain
        chains = tuple(str(r.chain) for r in result.span_repairs)
    after = before if out_text == text else readability_report(out_text, config.ms_per_char)
    counts = Counter(o.key for o in extract_emojis(out_text, config.emoji_mode))
    return RecordOutcome(record_id, group, before, after, out_text, gibberish, n_rep, n_unrep,
                         gain, tuple(sorted(counts.items())), chains)


def _process_batch(args: tuple[list[tuple[str, str]], PipelineConfig]) -> list[RecordOutcome | str]:
    batch, config = args
    out: list[RecordOutcome | str] = []
    for rid, text in batch:
        try:
            out.append(process_text(rid, text, config))
        except Exception as exc:  # one bad record must not sink the run
            out.append(f"{type(exc).__name__}: {exc}")
    return out


# -- aggregation -----------------------------------------------------------

_MEAN_FIELDS = ReadabilityReport.METRICS


@dataclass
class _GroupStats:
    records: int = 0
    sums: dict = field(default_factory=lambda: {p: {m: 0.0 for m in _MEAN_FIELDS} for p in ("before", "after")})
    counts: dict = field(default_factory=lambda: {p: {m: 0 for m in _MEAN_FIELDS} for p in ("before", "after")})

    def add(self, outcome: RecordOutcome) -> None:
        self.records += 1
        for phase, report in (("before", outcome.before), ("after", outcome.after)):
            for m in _MEAN_FIELDS:
                v = getattr(report, m)
                if v is not None:
                    self.sums[phase][m] += v
                    self.counts[phase][m] += 1

    def means(self) -> dict:
        out: dict[str, Any] = {"records": self.records}
        for phase in ("before", "after"):
            out[phase] = {m: (self.sums[phase][m] / self.counts[phase][m] if self.counts[phase][m] else None)
                          for m in _MEAN_FIELDS}
        out["word_bearing"] = {p: self.counts[p]["ari"] for p in ("before", "after")}
        return out


@dataclass
class PipelineReport:
    groups: dict[str, _GroupStats] = field(default_factory=lambda: {g.value: _GroupStats() for g in LengthGroup})
    records_processed: int = 0
    records_failed: int = 0
    records_with_gibberish: int = 0
    records_repaired: int = 0
    spans_repaired: int = 0
    spans_unrepaired: int = 0
    emojis_recovered: int = 0
    frequency: Counter = field(default_factory=Counter)
    chain: TranscodeChain | None = None
    top_n: int = 40
    bounds: tuple[int, int, int] = DEFAULT_BOUNDS
    repair: bool = True

    def add(self, outcome: RecordOutcome, original: str) -> None:
        self.records_processed += 1
        self.groups[outcome.group.value].add(outcome)
        self.records_with_gibberish += outcome.gibberish
        self.records_repaired += outcome.text != original
        self.spans_repaired += outcome.repaired_spans
        self.spans_unrepaired += outcome.unrepaired_spans
        self.emojis_recovered += outcome.emoji_gain
        self.frequency.update(dict(outcome.emoji_counts))

    @property
    def frequency_table(self) -> FrequencyTable:
        return FrequencyTable.from_counts(self.frequency)

    def to_dict(self) -> dict:
        table = self.frequency_table
        return {
            "groups": {g: s.means() for g, s in self.groups.items()},
            "counts": {
                "records_processed": self.records_processed,
                "records_failed": self.records_failed,
                "records_with_gibberish": self.records_with_gibberish,
                "records_repaired": self.records_repaired,
                "spans_repaired": self.spans_repaired,
                "spans_unrepaired": self.spans_unrepaired,
                "emojis_recovered": self.emojis_recovered,
                "emojis_total": table.total,
            },
            "frequency_top": [{"name": n, "count": c} for n, c in table.top(self.top_n)],
            "chain": None if self.chain is None else str(self.chain),
            "group_bounds": list(self.bounds),
            "repair": self.repair,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def frequency_csv(self, top_n: int | None = None) -> str:
        return self.frequency_table.to_csv(self.top_n if top_n is None else top_n)


# -- driver ----------------------------------------------------------------

def _batches(items: Iterable, size: int) -> Iterator[list]:
    batch = []
    for item in items:
        batch.append(item)
        if len(batch) >= size:
            yield batch
            batch = []
    if batch:
        yield batch


def _run_batches(batches: Iterator[list[CorpusRecord]], config: PipelineConfig):
    """Yield ``(batch, outcomes)`` in input order."""
    if config.workers == 1:
        for batch in batches:
            yield batch, _process_batch(([(r.id, r.text) for r in batch], config))
        return
    ctx = multiprocessing.get_context("fork" if os.name == "posix" else "spawn")
    with ctx.Pool(config.workers) as pool:
        pending: deque = deque()
        for batch in batches:
            pending.append((batch, pool.apply_async(_process_batch, (([(r.id, r.text) for r in batch], config),))))
            while len(pending) >= 2 * config.workers:
                done, res = pending.popleft()
                yield done, res.get()
        while pending:
            done, res = pending.popleft()
            yield done, res.get()


def run_records(records: Iterable[CorpusRecord | IngestError], config: PipelineConfig,
                writer: RecordWriter | None = None,
                on_error: Callable[[str], None] | None = None) -> PipelineReport:
    """Process records (ingest errors are counted and skipped)."""
    on_error = on_error or log.warning
    report = PipelineReport(top_n=config.top_n, bounds=config.group_bounds, repair=config.repair)
    failures = [0]

    def good_records():
        for item in records:
            if isinstance(item, IngestError):
                failures[0] += 1
                on_error(str(item))
            else:
                yield item

    stream: Iterable[CorpusRecord] = good_records()
    if config.repair and config.chain is None and config.infer_chain:
        head = []
        for rec in stream:
            head.append(rec)
            if len(head) >= config.infer_sample:
                break
        chain = infer_corpus_chain([r.text for r in head], config.detector)
        if chain is not None:
            config = replace(config, chain=chain)
        stream = _chain_iter(head, stream)
    report.chain = config.chain

    for batch, outcomes in _run_batches(_batches(stream, config.batch_size), config):
        for rec, outcome in zip(batch, outcomes):
            if isinstance(outcome, str):
                failures[0] += 1
                on_error(f"record {rec.id} (line {rec.line}): {outcome}")
                continue
            report.add(outcome, rec.text)
            if writer is not None:
                writer.write(rec, outcome.text)
    report.records_failed = failures[0]
    return report


def _chain_iter(head, tail):
    yield from head
    yield from tail


def run_pipeline(path: str | Path, config: PipelineConfig, out: TextIO | None = None,
                 on_error: Callable[[str], None] | None = None) -> PipelineReport:
    """Ingest ``path``, process every record and optionally write the result."""
    fmt = config.format or detect_format(path)
    config = replace(config, format=fmt)
    writer = RecordWriter(out, fmt, config.text_field) if out is not None else None
    records = iter_records(path, fmt, config.text_field, config.id_field, config.input_encoding)
    return run_records(records, config, writer, on_error)


def run_texts(texts: Iterable[str], config: PipelineConfig | None = None) -> PipelineReport:
    """Convenience wrapper: process in-memory strings (ids are 1-based positions)."""
    config = config or PipelineConfig()
    records = (CorpusRecord(str(i), t, i) for i, t in enumerate(texts, 1))
    return run_records(records, config)
