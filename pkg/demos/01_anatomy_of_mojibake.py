"""How one emoji turns into gibberish, and how the repair finds its way back.

    python3 demos/01_anatomy_of_mojibake.py
"""

# %% An emoji is four UTF-8 bytes. Read those bytes as cp1252 and each one
# becomes its own character.
from demojibake import corrupt, detect_spans, repair_text, suspicion_score
from demojibake.repair import TranscodeChain, apply_chain, default_chains

joy = "\U0001F602"
print("bytes     ", joy.encode("utf-8").hex(" "))
garbled, lossless = corrupt(joy, "cp1252->utf_8")
print("as cp1252 ", garbled, "| lossless:", lossless)

# %% Latin-1 defines all 256 bytes, so the same bytes give C1 control characters
# instead of punctuation.
latin, _ = corrupt(joy, "latin_1->utf_8")
print("as latin_1", ascii(latin))

# %% The detector works on spans. Accented words are fine; the garbled run is not.
tweet = f"me reading the news {garbled}{garbled} at 3am, café closed"
print("\nscore", round(suspicion_score(tweet), 2))
for span in detect_spans(tweet):
    print("span", span.start, span.end, repr(span.slice(tweet)), sorted(span.triggers))

# %% Repair re-encodes each span with the file codec and decodes it with the
# source codec. The chain list starts with the usual suspects.
print("\nfirst chains:", [str(c) for c in default_chains()[:4]], "of", len(default_chains()))
print("one chain by hand:", apply_chain(garbled, TranscodeChain("cp1252", "utf_8")).repaired)

result = repair_text(tweet)
print("repaired:", result.repaired_text)
for r in result.span_repairs:
    print(f"  {r.span.start}-{r.span.end} via {r.chain}: {r.before!r} -> {r.after}")

# %% Garbling twice needs two rounds.
twice = garbled.encode("utf-8").decode("cp1252")
print("\ntwice garbled:", twice)
print("depth 1:", repair_text(twice).repaired_text)
print("depth 2:", repair_text(twice, depth=2).repaired_text)
