import io

import pytest
from hypothesis import given, strategies as st

from demojibake.forge import (Cause, CorruptionSpec, ManifestEntry, corrupt, forge_corpus, is_lossless,
                              read_manifest, write_manifest)
from demojibake.registry import CodecError, Policy
from demojibake.repair import TranscodeChain, repair_text
from demojibake.synthetic import sample_texts

CP1252 = TranscodeChain("cp1252", "utf_8")


def test_corrupt_examples():
    assert corrupt("😂", CP1252) == ("ðŸ˜‚", True)
    with pytest.raises(CodecError):
        corrupt("😍", CP1252)  # byte 0x8D has no cp1252 character
    garbled, lossless = corrupt("😍", "latin_1->utf_8")
    assert garbled == "ð\x9f\x98\x8d" and lossless


def test_replace_policy_is_lossy():
    garbled, lossless = corrupt("😍", CorruptionSpec.of(CP1252, policy=Policy.REPLACE))
    assert "�" in garbled and not lossless


def test_causes_share_the_byte_transform():
    outs = {corrupt("😂 hi", CorruptionSpec.of(CP1252, cause)) for cause in Cause}
    assert len(outs) == 1


def test_is_lossless_examples():
    assert is_lossless("😂", CP1252)
    assert not is_lossless("😍", CP1252)
    assert is_lossless("café", "cp1252->cp1252")
    assert not is_lossless("😂", "cp1252->cp1252")


def records(n):
    return [(str(i), t) for i, t in enumerate(sample_texts()[:n])]


def test_forge_counts():
    out, manifest = forge_corpus(records(10), "latin_1->utf_8", rate=1.0)
    assert len(out) == 10 and len(manifest) == 10 and all(e.lossless for e in manifest)
    out, manifest = forge_corpus(records(10), CP1252, rate=0.0)
    assert out == records(10) and manifest == []


def test_forge_is_deterministic_and_order_free():
    a = forge_corpus(records(40), CP1252, rate=0.5, seed=7)
    b = forge_corpus(records(40), CP1252, rate=0.5, seed=7)
    assert a == b
    rev = forge_corpus(list(reversed(records(40))), CP1252, rate=0.5, seed=7)
    assert sorted(rev[0]) == sorted(a[0])
    assert 0 < len(a[1]) < 40


def test_rate_is_validated():
    with pytest.raises(ValueError):
        forge_corpus(records(2), CP1252, rate=1.5)


def test_manifest_round_trip(tmp_path):
    _, manifest = forge_corpus(records(12), CP1252, rate=1.0)
    path = tmp_path / "m.tsv"
    write_manifest(manifest, path)
    assert read_manifest(path) == manifest
    assert path.read_text().splitlines()[0].split("\t")[1] == "cp1252->utf_8"
    with pytest.raises(ValueError):
        ManifestEntry.from_line("1\tcp1252->utf_8\tmaybe")
    buf = io.StringIO()
    write_manifest(manifest[:1], buf)
    assert buf.getvalue().endswith("\n")


@given(st.sampled_from(sample_texts()))
def test_lossless_forgeries_repair_exactly(text):
    for chain in (CP1252, TranscodeChain("latin_1", "utf_8")):
        if is_lossless(text, chain):
            assert repair_text(corrupt(text, chain)[0]).repaired_text == text
