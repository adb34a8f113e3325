"""Which code pages can garble an emoji without losing information.

    python3 demos/04_codec_tour.py
"""

# %% Walk the single-byte registry and try a few emoji through each codec.
from collections import defaultdict

from demojibake import corrupt, is_lossless, list_codecs, repair_text
from demojibake.registry import Kind, codec_table, is_ascii_compatible

emoji = ["\U0001F602", "\U0001F62D", "\U0001F914", "\U0001F937‍♀️", "\U0001F9A0"]
by_outcome = defaultdict(list)
for codec in list_codecs():
    if codec.kind is not Kind.SINGLE_BYTE:
        continue
    ok = [e for e in emoji if is_lossless(e, f"{codec.name}->utf_8")]
    back = all(repair_text(corrupt(e, f"{codec.name}->utf_8")[0]).repaired_text == e for e in ok)
    defined = len(codec_table(codec).defined_bytes())
    by_outcome[len(ok)].append(f"{codec.name}({defined}{'' if is_ascii_compatible(codec) else ', not ascii'})"
                               + ("" if back else " !"))

# %% Codecs with every byte defined garble everything losslessly; those with
# holes lose some emoji.
for n in sorted(by_outcome, reverse=True):
    print(f"{n}/{len(emoji)} lossless:", ", ".join(by_outcome[n]))
