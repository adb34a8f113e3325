"""Seeded synthetic corpora for tests, demos and benchmarks.

Everything here is deterministic for a given seed, so a failing check can be
replayed exactly.
"""

from __future__ import annotations

import random
from functools import lru_cache
from importlib import resources
from typing import Iterator

from .emojis import codepoints_for_name

_WORDS = (
    "the a an and or but so to of in on at for with from by about into over after before "
    "people today tomorrow morning night week news update thanks love great good bad happy sad "
    "really very just still never always maybe again finally here there this that what when why how "
    "game match team win lost score friends family home work school city weather rain sun coffee "
    "lunch dinner party music song movie book photo video time day year life world best worst "
    "new old big small little long short fast slow hot cold funny crazy amazing awesome terrible "
    "is was are were be been have has had do does did can could will would should must "
    "we you they he she it i me us them my your our their"
).split()

_ACCENTED = (
    "café naïve résumé façade jalapeño piñata Zürich São Paulo Grüße crème brûlée déjà vu "
    "fiancée coöperate Ångström Málaga Bogotá Pokémon über schön Straße Köln Mädchen Ärger "
    "élève été forêt hôtel château garçon leçon français Noël Þór Ísland año niño señor mañana "
    "canción corazón acción português não coração irmã avó Kraków Łódź Dvořák Škoda Brontë "
    "Citroën Curaçao Gdańsk Reykjavík smörgåsbord Øresund Århus Besançon naïveté rosé soufflé"
).split()

_FILLER = (
    "Le petit déjeuner était délicieux ce matin.",
    "Wir haben über das Wetter gesprochen.",
    "La canción de la mañana fue preciosa.",
    "O coração não mente, disse a avó.",
    "Une crème brûlée au café, s'il vous plaît.",
)


@lru_cache(maxsize=1)
def sample_texts() -> tuple[str, ...]:
    """The bundled emoji-bearing texts (one per line, ``#`` lines skipped)."""
    path = resources.files("demojibake") / "data" / "sample_texts.txt"
    return tuple(line for line in path.read_text(encoding="utf-8").splitlines()
                 if line and not line.startswith("#"))


def ascii_lines(n: int, seed: int = 0) -> list[str]:
    """Plain English-like ASCII sentences with punctuation, digits and hashtags."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        words = rng.choices(_WORDS, k=rng.randint(3, 30))
        if rng.random() < 0.3:
            words.append(f"#{rng.choice(_WORDS)}")
        if rng.random() < 0.2:
            words.insert(rng.randrange(len(words)), str(rng.randint(0, 2024)))
        line = " ".join(words).capitalize() + rng.choice((".", "!", "?", "...", " :)", ""))
        out.append(line)
    return out


def accented_prose(n: int, seed: int = 0) -> list[str]:
    """Sentences mixing English filler with accented European words."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        if rng.random() < 0.2:
            out.append(rng.choice(_FILLER))
            continue
        words = rng.choices(_WORDS, k=rng.randint(3, 15))
        for _ in range(rng.randint(1, 3)):
            words.insert(rng.randrange(len(words) + 1), rng.choice(_ACCENTED))
        out.append(" ".join(words).capitalize() + ".")
    return out


def tweet_of_length(rng: random.Random, target: int) -> str:
    """Join sample texts and filler words until the text reaches ``target`` codepoints."""
    texts = sample_texts()
    parts = [rng.choice(texts)]
    size = len(parts[0])
    while size < target:
        piece = rng.choice(texts) if rng.random() < 0.4 else rng.choice(_WORDS)
        parts.append(piece)
        size += len(piece) + 1
    text = " ".join(parts)
    return text[:target].rstrip() if len(text) > target + 20 else text


def clean_records(n: int, length: int = 200, seed: int = 0) -> list[str]:
    """Clean emoji-bearing records of about ``length`` codepoints each."""
    rng = random.Random(seed)
    return [tweet_of_length(rng, length) for _ in range(n)]


def length_spread(n: int, seed: int = 0) -> list[str]:
    """Emoji-bearing records spread over all four length groups (about 20 to 280 codepoints)."""
    rng = random.Random(seed)
    return [tweet_of_length(rng, rng.choice((30, 60, 100, 130, 160, 200, 230, 270))) for _ in range(n)]


def emoji_count_corpus(counts: dict[str, int], seed: int = 0, per_record: int = 3) -> list[str]:
    """Records holding exactly ``counts[name]`` occurrences of each named emoji.

    Emojis are shuffled into short ASCII sentences, ``per_record`` at a time.
    """
    table = codepoints_for_name()
    tokens = [name for name, k in counts.items() for _ in range(k)]
    rng = random.Random(seed)
    rng.shuffle(tokens)
    out = []
    for i in range(0, len(tokens), per_record):
        chunk = tokens[i:i + per_record]
        words = rng.choices(_WORDS, k=4)
        emojis = " ".join("".join(map(chr, table[name])) for name in chunk)
        out.append(f"{' '.join(words).capitalize()} {emojis}")
    return out


def iter_ids(prefix: str = "r") -> Iterator[str]:
    i = 0
    while True:
        yield f"{prefix}{i}"
        i += 1
