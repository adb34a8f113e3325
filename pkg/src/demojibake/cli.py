"""Command line entry point: ``demojibake {repair,analyze,forge,codecs}``.

Exit status: 0 on success, 1 on a configuration error, 2 when some records
could not be read or processed (the rest of the run still completes).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import ExitStack
from pathlib import Path

from . import registry
from .forge import Cause, CorruptionSpec, ManifestEntry, forge_records, write_manifest
from .pipeline import (FORMATS, ConfigError, CorpusRecord, IngestError, PipelineConfig, RecordWriter,
                       config_from_mapping, detect_format, iter_records, read_config_file, run_pipeline)
from .registry import CodecError, Policy

EXIT_OK, EXIT_CONFIG, EXIT_PARTIAL = 0, 1, 2

log = logging.getLogger("demojibake")


def _add_input_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="corpus file")
    p.add_argument("--format", choices=FORMATS, help="input format (default: from the file extension)")
    p.add_argument("--text-field", default=None, help="text column or key (default: text)")
    p.add_argument("--id-field", default=None, help="id column or key (default: id)")
    p.add_argument("--input-encoding", default=None,
                   help="decode the input bytes with this codec instead of UTF-8")


def _add_pipeline_options(p: argparse.ArgumentParser) -> None:
    _add_input_options(p)
    p.add_argument("--config", help="key = value settings file")
    p.add_argument("--report", help="write the JSON report here (default: stdout)")
    p.add_argument("--frequency-csv", help="also write the emoji frequency table as name,count CSV")
    p.add_argument("--top", type=int, default=None, help="emoji entries in the report (default: 40)")
    p.add_argument("--group-bounds", default=None, help="length group bounds, e.g. 71,141,211")
    p.add_argument("--emoji-mode", choices=("codepoint", "cluster"), default=None)
    p.add_argument("--workers", type=int, default=None, help="worker processes (default: 1)")
    p.add_argument("--batch-size", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="demojibake", description="Find and repair emoji mojibake in text corpora.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress and per-record failures")
    sub = parser.add_subparsers(dest="command", required=True)

    rp = sub.add_parser("repair", help="repair a corpus and report before/after metrics")
    _add_pipeline_options(rp)
    rp.add_argument("--out", help="write the repaired corpus here (same format as the input)")
    rp.add_argument("--chain", help="pin one FILE->SOURCE chain for every record, e.g. cp1252->utf_8")
    rp.add_argument("--infer-chain", action="store_true",
                    help="pin the chain that repairs most of the first records, if one dominates")
    rp.add_argument("--depth", type=int, choices=(1, 2), default=None, help="2 also undoes double mojibake")
    rp.add_argument("--multibyte", action="store_true", default=None, help="include multi-byte codecs in the search")
    rp.add_argument("--threshold", type=float, default=None, help="detector threshold (default: 0.5)")

    ap = sub.add_parser("analyze", help="readability metrics and emoji frequency, no repair")
    _add_pipeline_options(ap)

    fp = sub.add_parser("forge", help="corrupt a clean corpus with a known chain")
    _add_input_options(fp)
    fp.add_argument("--chain", required=True, help="FILE->SOURCE chain, e.g. cp1252->utf_8")
    fp.add_argument("--rate", type=float, default=1.0, help="share of records to corrupt (default: 1.0)")
    fp.add_argument("--seed", default="0", help="seed for picking records (default: 0)")
    fp.add_argument("--cause", choices=[c.value for c in Cause], default=Cause.WRONG_DECODE.value)
    fp.add_argument("--policy", choices=[p.value for p in Policy], default=Policy.STRICT.value)
    fp.add_argument("--out", help="forged corpus (default: stdout)")
    fp.add_argument("--manifest", help="manifest of corrupted records (id, chain, lossless)")

    cp = sub.add_parser("codecs", help="list the codec registry")
    cp.add_argument("--multibyte", action="store_true", help="include multi-byte codecs")
    cp.add_argument("--json", action="store_true", help="machine-readable output")
    return parser


def _pipeline_config(args, repair: bool) -> PipelineConfig:
    values = read_config_file(args.config) if args.config else {}
    flags = {
        "format": args.format, "text_field": args.text_field, "id_field": args.id_field,
        "input_encoding": args.input_encoding, "group_bounds": args.group_bounds,
        "emoji_mode": args.emoji_mode, "top_n": args.top, "workers": args.workers,
        "batch_size": args.batch_size,
    }
    if repair:
        flags.update(chain=args.chain, depth=args.depth, multibyte=args.multibyte, threshold=args.threshold,
                     infer_chain=args.infer_chain or None)
    # command-line flags win over the config file
    values.update({k: str(v) for k, v in flags.items() if v is not None})
    values["repair"] = str(repair)
    config = config_from_mapping(values)
    if config.input_encoding:
        try:
            registry.get_codec(config.input_encoding, multibyte=True)
        except LookupError:
            raise ConfigError(f"unknown input encoding {config.input_encoding!r}") from None
    return config


def _cmd_pipeline(args, repair: bool) -> int:
    config = _pipeline_config(args, repair)
    if not Path(args.input).is_file():
        raise ConfigError(f"input not found: {args.input}")
    failures: list[str] = []

    def on_error(msg: str) -> None:
        failures.append(msg)
        log.warning(msg)

    with ExitStack() as stack:
        out = None
        if repair and args.out:
            out = stack.enter_context(open(args.out, "w", encoding="utf-8", newline=""))
        report = run_pipeline(args.input, config, out, on_error)
    text = report.to_json()
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.frequency_csv:
        Path(args.frequency_csv).write_text(report.frequency_csv(), encoding="utf-8")
    if failures:
        print(f"demojibake: {len(failures)} record(s) failed; first: {failures[0]}", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def _cmd_forge(args) -> int:
    try:
        spec = CorruptionSpec.of(args.chain, args.cause, args.policy)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if not 0.0 <= args.rate <= 1.0:
        raise ConfigError("--rate must be between 0 and 1")
    if not Path(args.input).is_file():
        raise ConfigError(f"input not found: {args.input}")
    fmt = args.format or detect_format(args.input)
    text_field = args.text_field or "text"
    failures = []
    records: dict[str, CorpusRecord] = {}

    def pairs():
        for item in iter_records(args.input, fmt, text_field, args.id_field or "id", args.input_encoding):
            if isinstance(item, IngestError):
                failures.append(str(item))
                log.warning(str(item))
                continue
            records[item.id] = item
            yield item.id, item.text

    manifest = []
    with ExitStack() as stack:
        out = stack.enter_context(open(args.out, "w", encoding="utf-8", newline="")) if args.out else sys.stdout
        writer = RecordWriter(out, fmt, text_field)
        for forged in forge_records(pairs(), spec, args.rate, args.seed):
            writer.write(records.pop(forged.record_id), forged.text)
            if forged.picked:
                manifest.append((forged.record_id, forged.lossless))
    entries = [ManifestEntry(rid, spec.chain, ok) for rid, ok in manifest]
    if args.manifest:
        write_manifest(entries, args.manifest)
    lossy = sum(1 for e in entries if not e.lossless)
    print(f"demojibake: corrupted {len(entries)} record(s) with {spec.chain}; {lossy} not lossless",
          file=sys.stderr)
    return EXIT_PARTIAL if failures else EXIT_OK


def _cmd_codecs(args) -> int:
    rows = []
    for codec in registry.list_codecs(multibyte=args.multibyte):
        single = codec.kind is registry.Kind.SINGLE_BYTE
        rows.append({
            "name": codec.name,
            "kind": codec.kind.value,
            "ascii_compatible": registry.is_ascii_compatible(codec),
            "defined_bytes": len(registry.codec_table(codec).defined_bytes()) if single else None,
        })
    if args.json:
        print(json.dumps({"codecs": rows, "unsupported": list(registry.unsupported_codecs())}, indent=2))
        return EXIT_OK
    for r in rows:
        defined = "" if r["defined_bytes"] is None else f"{r['defined_bytes']:>4}"
        print(f"{r['name']:<18}{r['kind']:<12}{'ascii' if r['ascii_compatible'] else '-':<7}{defined}")
    skipped = registry.unsupported_codecs()
    if skipped:
        print(f"# not available in this Python: {', '.join(skipped)}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "repair":
            return _cmd_pipeline(args, repair=True)
        if args.command == "analyze":
            return _cmd_pipeline(args, repair=False)
        if args.command == "forge":
            return _cmd_forge(args)
        return _cmd_codecs(args)
    except (ConfigError, CodecError) as exc:
        print(f"demojibake: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"demojibake: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
