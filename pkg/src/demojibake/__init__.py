"""Detect and repair emoji mojibake, and measure what the repair changes.

The package is organised as a small library plus a batch pipeline:

``registry``     single-byte code page tables and the UTF/multi-byte codecs
``detector``     scores text for encoding gibberish and finds suspicious spans
``repair``       searches transcode chains to undo the garbling
``emojis``       emoji extraction, shortnames and frequency tables
``readability``  grade formulas and reading time
``forge``        corrupts clean text with a known chain (test oracle)
``pipeline``     corpus ingest, repair, reporting; ``cli`` wraps it
"""

from .detector import DetectorConfig, GibberishSpan, detect_spans, suspicion_score
from .emojis import EmojiOccurrence, FrequencyTable, extract_emojis, frequency_table, shortname
from .forge import CorruptionSpec, ManifestEntry, corrupt, forge_corpus, forge_records, is_lossless
from .pipeline import (CorpusRecord, LengthGroup, PipelineConfig, PipelineReport, assign_group, ingest,
                       run_pipeline, run_texts)
from .readability import ReadabilityReport, readability_report, reading_time, text_standard
from .registry import (CodecError, CodecId, CodecTable, Policy, Status, decode_bytes, encode_text,
                       get_codec, list_codecs, transcode)
from .repair import (RepairCandidate, RepairResult, TranscodeChain, apply_chain, enumerate_chains,
                     infer_corpus_chain, repair_span, repair_text, score_candidate)

__version__ = "0.1.0"

__all__ = [
    "CodecError", "CodecId", "CodecTable", "CorpusRecord", "CorruptionSpec", "DetectorConfig",
    "EmojiOccurrence", "FrequencyTable", "GibberishSpan", "LengthGroup", "ManifestEntry", "PipelineConfig",
    "PipelineReport", "Policy", "ReadabilityReport", "RepairCandidate", "RepairResult", "Status",
    "TranscodeChain", "apply_chain", "assign_group", "corrupt", "decode_bytes", "detect_spans",
    "encode_text", "enumerate_chains", "extract_emojis", "forge_corpus", "forge_records",
    "frequency_table", "get_codec", "infer_corpus_chain", "ingest", "is_lossless", "list_codecs",
    "readability_report", "reading_time", "repair_span", "repair_text", "run_pipeline", "run_texts",
    "score_candidate", "shortname", "suspicion_score", "text_standard", "transcode",
]
