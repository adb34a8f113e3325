"""Regenerate the static data files bundled under src/demojibake/data.

Run once from the repository root; the outputs are committed and the package
never consults the host codec library or third-party packages at runtime.

    python tools/generate_data.py --emoji-src /path/to/emoji --dale-src easy_words.txt
"""

import argparse
import json
import re
import sys
import unicodedata
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "demojibake" / "data"
TABLE_VERSION = 1

SINGLE_BYTE = """
ascii cp037 cp273 cp424 cp437 cp500 cp720 cp737 cp775 cp850 cp852 cp855 cp856
cp857 cp858 cp860 cp861 cp862 cp863 cp864 cp865 cp866 cp869 cp874 cp875 cp1006
cp1026 cp1125 cp1140 cp1250 cp1251 cp1252 cp1253 cp1254 cp1255 cp1256 cp1257
cp1258 latin_1 iso8859_2 iso8859_3 iso8859_4 iso8859_5 iso8859_6 iso8859_7
iso8859_8 iso8859_9 iso8859_10 iso8859_11 iso8859_13 iso8859_14 iso8859_15
iso8859_16 koi8_r koi8_t koi8_u kz1048 mac_cyrillic mac_greek mac_iceland
mac_latin2 mac_roman mac_turkish ptcp154
""".split()

# Names used verbatim by the frequency tables we want to match.
PREFERRED_NAMES = """
joy sob rofl thinking facepalm male_sign roll_eyes female_sign weary shrug
woozy_face see_no_evil flushed clown_face nauseated_face skull speak_no_evil
vomiting_face eyes syringe mask unamused point_down rotating_light hear_no_evil
grimacing satisfied sweat_smile dizzy_face dizzy wink 100 upside_down_face
melting_face microbe tired_face raised_eyebrow scream smiling_face_with_tear
zany_face
""".split()

SNAKE = re.compile(r"^[a-z0-9_]+$")


def write_codec_tables():
    out = DATA / "codecs"
    out.mkdir(parents=True, exist_ok=True)
    for name in SINGLE_BYTE:
        rows = [f"# codec: {name}", f"# version: {TABLE_VERSION}"]
        for b in range(256):
            try:
                cp = ord(bytes([b]).decode(name))
                rows.append(f"0x{b:02X}\t0x{cp:04X}")
            except UnicodeDecodeError:
                rows.append(f"0x{b:02X}\tUNDEF")
        (out / f"{name}.tbl").write_text("\n".join(rows) + "\n", encoding="ascii")


def _snake(name):
    name = unicodedata.normalize("NFKD", name.strip(":")).encode("ascii", "ignore").decode()
    name = re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_")
    return name


def write_emoji_names(emoji_src):
    sys.path.insert(0, str(emoji_src))
    import emoji  # noqa: PLC0415

    preferred = set(PREFERRED_NAMES)
    table = {}
    for seq, info in emoji.EMOJI_DATA.items():
        key = tuple(ord(c) for c in seq if c != "️")
        aliases = [a.strip(":") for a in info.get("alias", [])]
        names = [a for a in aliases if a in preferred]
        names += [a for a in aliases if SNAKE.match(a)]
        names.append(_snake(info["en"]))
        name = names[0]
        # Fully-qualified and unqualified forms collapse onto one key.
        if key not in table or name in preferred:
            table[key] = name
    lines = ["# hex-codepoint-sequence<TAB>shortname"]
    for key in sorted(table):
        lines.append(" ".join(f"{cp:X}" for cp in key) + "\t" + table[key])
    (DATA / "emoji_names.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_dale_list(src):
    words = sorted({w.strip().lower() for w in Path(src).read_text().split() if w.strip()})
    (DATA / "dale_chall.txt").write_text("\n".join(words) + "\n", encoding="ascii")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--emoji-src", help="directory containing the `emoji` package")
    ap.add_argument("--dale-src", help="plain word list, one familiar word per line")
    args = ap.parse_args()
    write_codec_tables()
    if args.emoji_src:
        write_emoji_names(args.emoji_src)
    if args.dale_src:
        write_dale_list(args.dale_src)
    json.dump({"codecs": len(SINGLE_BYTE)}, sys.stdout)
    print()


if __name__ == "__main__":
    main()
