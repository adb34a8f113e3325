import csv
import io
import json

import pytest
from hypothesis import given, strategies as st

from demojibake.forge import corrupt, is_lossless
from demojibake.pipeline import (ConfigError, CorpusRecord, IngestError, LengthGroup, PipelineConfig, RecordWriter,
                                 assign_group, config_from_mapping, detect_format, ingest, iter_records,
                                 parse_bounds, read_config_file, run_pipeline, run_records, run_texts)
from demojibake.repair import TranscodeChain
from demojibake.synthetic import clean_records, sample_texts

CHAIN = TranscodeChain("cp1252", "utf_8")
JOY = "\U0001F602"


def write_csv(path, texts):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "text"])
        for i, t in enumerate(texts, 1):
            w.writerow([f"r{i}", t])


def test_ingest_csv(tmp_path):
    path = tmp_path / "in.csv"
    write_csv(path, ["one 😂", "two, with comma", 'three "quoted"'])
    records = list(ingest(path))
    assert [(r.id, r.text) for r in records] == [("r1", "one 😂"), ("r2", "two, with comma"),
                                                 ("r3", 'three "quoted"')]
    assert records[0].fields == {"id": "r1", "text": "one 😂"}


def test_ingest_jsonl_reports_bad_lines(tmp_path):
    path = tmp_path / "in.jsonl"
    path.write_text('{"id": "a", "text": "fine"}\n{"id": "b"}\nnot json\n[1]\n\n{"text": "no id"}\n',
                    encoding="utf-8")
    items = list(iter_records(path))
    errors = [i for i in items if isinstance(i, IngestError)]
    assert [e.line for e in errors] == [2, 3, 4]
    assert "text" in str(errors[0]) and str(errors[0]).startswith("line 2")
    good = [i for i in items if isinstance(i, CorpusRecord)]
    assert [(r.id, r.text) for r in good] == [("a", "fine"), ("6", "no id")]
    with pytest.raises(IngestError):
        list(ingest(path))


def test_ingest_txt_uses_line_numbers(tmp_path):
    path = tmp_path / "in.txt"
    path.write_text("first\nsecond 😂\n", encoding="utf-8")
    assert [(r.id, r.text) for r in list(ingest(path))] == [("1", "first"), ("2", "second 😂")]


def test_csv_without_text_column(tmp_path):
    path = tmp_path / "in.csv"
    path.write_text("id,body\n1,x\n", encoding="utf-8")
    with pytest.raises(IngestError):
        list(ingest(path))


def test_format_detection():
    assert detect_format("a.CSV") == "csv" and detect_format("b.jsonl") == "jsonl"
    assert detect_format("c.txt") == "txt" and detect_format("notes") == "txt"


def test_group_examples():
    assert assign_group(70) is LengthGroup.G1
    assert assign_group(71) is LengthGroup.G2
    assert assign_group(141) is LengthGroup.G3
    assert assign_group(210) is LengthGroup.G3
    assert assign_group(211) is LengthGroup.G4
    assert assign_group("x" * 300) is LengthGroup.G4
    assert assign_group(CorpusRecord("a", "hi")) is LengthGroup.G1
    assert assign_group(50, (10, 20, 30)) is LengthGroup.G4


def test_bounds_validation():
    assert parse_bounds("10, 20,30") == (10, 20, 30)
    for bad in ("10,20", "30,20,10", "a,b,c", "0,5,9"):
        with pytest.raises(ConfigError):
            parse_bounds(bad)


@given(st.integers(min_value=0, max_value=2000))
def test_groups_partition_lengths(n):
    groups = [g for g, lo, hi in ((LengthGroup.G1, 0, 71), (LengthGroup.G2, 71, 141),
                                  (LengthGroup.G3, 141, 211), (LengthGroup.G4, 211, 10**9)) if lo <= n < hi]
    assert groups == [assign_group(n)]


def forged_lossless(n):
    out = []
    for text in clean_records(n * 3, length=90, seed=4):
        if JOY not in text:
            text = f"{text[:-2]} {JOY}"
        if is_lossless(text, CHAIN):
            out.append(text)
        if len(out) == n:
            return out
    raise AssertionError("not enough lossless texts")


def test_forged_corpus_is_fully_flagged_and_restored(tmp_path):
    clean = forged_lossless(100)
    forged = [corrupt(t, CHAIN)[0] for t in clean]
    src, dst, expect = tmp_path / "forged.csv", tmp_path / "out.csv", tmp_path / "clean.csv"
    write_csv(src, forged)
    write_csv(expect, clean)
    with open(dst, "w", encoding="utf-8", newline="") as out:
        report = run_pipeline(src, PipelineConfig(), out)
    counts = report.to_dict()["counts"]
    assert counts["records_processed"] == 100 and counts["records_with_gibberish"] == 100
    assert counts["records_repaired"] == 100 and counts["spans_unrepaired"] == 0
    assert dst.read_bytes() == expect.read_bytes()


def test_clean_corpus_metrics_are_unchanged():
    report = run_texts(sample_texts()).to_dict()
    assert report["counts"]["records_with_gibberish"] == 0
    assert sum(g["records"] for g in report["groups"].values()) == len(sample_texts())
    for stats in report["groups"].values():
        assert stats["before"] == stats["after"]


def test_frequency_of_a_single_emoji():
    report = run_texts([f"lol {JOY}"] * 100)
    assert report.frequency_table.top(1) == [("joy", 100)]
    assert report.to_dict()["frequency_top"] == [{"name": "joy", "count": 100}]


def test_report_counts_are_conserved():
    texts = sample_texts()[:30] + tuple(corrupt(t, CHAIN)[0] for t in forged_lossless(20))
    report = run_texts(texts)
    d = report.to_dict()
    assert d["counts"]["records_processed"] == 50
    assert sum(g["records"] for g in d["groups"].values()) == 50
    assert d["counts"]["emojis_total"] == sum(report.frequency.values())
    assert json.loads(report.to_json()) == d


def test_analyze_mode_does_not_repair():
    report = run_texts(["x ðŸ˜‚ y"], PipelineConfig(repair=False))
    assert report.records_repaired == 0 and report.records_with_gibberish == 0


def test_failures_are_counted_and_processing_continues():
    errors = []
    records = [CorpusRecord("a", "fine"), IngestError(2, "broken"), CorpusRecord("c", "ðŸ˜‚", 3)]
    report = run_records(records, PipelineConfig(), on_error=errors.append)
    assert report.records_failed == 1 and report.records_processed == 2 and errors == ["line 2: broken"]


def test_workers_do_not_change_the_report():
    texts = list(sample_texts()) + [corrupt(t, CHAIN)[0] for t in forged_lossless(40)]
    one = run_texts(texts, PipelineConfig(batch_size=16)).to_json()
    four = run_texts(texts, PipelineConfig(batch_size=16, workers=3)).to_json()
    assert one == four


def test_infer_chain_pins_the_dominant_chain():
    texts = [corrupt(t, CHAIN)[0] for t in forged_lossless(30)]
    report = run_texts(texts, PipelineConfig(infer_chain=True))
    assert report.chain == CHAIN and report.records_repaired == 30


def test_config_file_and_mapping(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# settings\nthreshold = 0.6\nweight.c1_control = 0.3\nchain = cp1252->utf_8\n"
                    "group_bounds = 50,100,150\nworkers = 2\n", encoding="utf-8")
    config = config_from_mapping(read_config_file(path))
    assert config.detector.threshold == 0.6 and config.detector.weights["c1_control"] == 0.3
    assert config.chain == CHAIN and config.group_bounds == (50, 100, 150) and config.workers == 2
    for bad in ({"threshold": "2"}, {"nope": "1"}, {"weight.vibes": "1"}, {"depth": "3"},
                {"chain": "x->y"}, {"multibyte": "maybe"}, {"workers": "many"}):
        with pytest.raises(ConfigError):
            config_from_mapping(bad)


def test_writer_formats():
    rec = CorpusRecord("7", "old", 1, {"id": "7", "text": "old", "lang": "en"})
    buf = io.StringIO()
    RecordWriter(buf, "jsonl").write(rec, "new 😂")
    assert json.loads(buf.getvalue()) == {"id": "7", "text": "new 😂", "lang": "en"}
    assert "😂" in buf.getvalue()
    buf = io.StringIO()
    RecordWriter(buf, "txt").write(rec, "new")
    assert buf.getvalue() == "new\n"
