"""Why garbled emoji inflate readability grades.

    python3 demos/03_readability_of_garbage.py
"""

# %% Mojibake turns one emoji into a long run of letters and symbols, which the
# formulas read as a long, hard word.
from demojibake import corrupt, readability_report, repair_text
from demojibake.readability import tokenize_stats

clean = "Finally got the vaccine today \U0001F489\U0001F4AA feeling great \U0001F602"
garbled, _ = corrupt(clean, "cp1252->utf_8")

for label, text in (("clean", clean), ("garbled", garbled), ("repaired", repair_text(garbled).repaired_text)):
    s = tokenize_stats(text)
    r = readability_report(text)
    print(f"{label:9s} chars={s.characters:3d} words={s.words} syllables={s.syllables:2d} "
          f"ARI={r.ari:6.2f} FKG={r.flesch_kincaid_grade:6.2f} "
          f"standard={r.text_standard} read={r.reading_time_s:.3f}s")

# %% Reading time is linear in the length, so every extra garbled character
# costs the same.
print("\nextra characters from garbling:", len(garbled) - len(clean))
