"""Codec catalog and the encode/decode/transcode primitives.

Single-byte codecs are driven by the bundled ``data/codecs/*.tbl`` tables, so
their behaviour does not depend on the host Python's codec modules.  UTF
codecs are algorithmic.  East Asian multi-byte codecs are optional: they are
only listed when ``multibyte=True`` is requested, in which case the host codec
implementation is used.

Table file format (one file per codec, ``<name>.tbl``)::

    # codec: cp1252
    # version: 1
    0x00<TAB>0x0000
    ...
    0x81<TAB>UNDEF

Exactly 256 data rows, one per byte value.  Extra tables can be loaded with
:func:`register_table`.
"""

from __future__ import annotations

import codecs as _stdlib_codecs
import enum
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Callable, Mapping, Sequence

__all__ = [
    "Kind", "Policy", "Status", "CodecId", "CodecTable", "CodecError",
    "list_codecs", "get_codec", "codec_table", "unsupported_codecs",
    "decode_bytes", "encode_text", "transcode", "load_table", "register_table", "unregister_table",
    "is_ascii_compatible", "strict_decoder", "strict_encoder", "catalog_generation",
    "FILE_PRIORITY", "SOURCE_PRIORITY", "ALIASES",
]


class Kind(enum.Enum):
    SINGLE_BYTE = "single_byte"
    UTF_FAMILY = "utf_family"
    MULTI_BYTE = "multi_byte"


class Policy(str, enum.Enum):
    STRICT = "strict"
    REPLACE = "replace"
    IGNORE = "ignore"


class Status(enum.Enum):
    CLEAN = "clean"
    LOSSY = "lossy"
    FAILED = "failed"


@dataclass(frozen=True, order=True)
class CodecId:
    name: str
    kind: Kind = field(compare=False)

    def __str__(self) -> str:
        return self.name


class CodecError(UnicodeError):
    """Strict encode/decode hit a unit the codec cannot map.

    ``status`` is always :attr:`Status.FAILED`; ``position`` is the offset
    (byte offset for decode, codepoint offset for encode) of the first
    offending unit.
    """

    status = Status.FAILED

    def __init__(self, codec: str, operation: str, position: int, reason: str = ""):
        self.codec = codec
        self.operation = operation
        self.position = position
        super().__init__(f"{operation} with {codec} failed at {position}: {reason}".rstrip(": "))


UNDEFINED = -1
_UNDEF_CHAR = "￾"  # charmap sentinel for an undefined byte


@dataclass(frozen=True)
class CodecTable:
    """Byte <-> codepoint mapping of a single-byte codec."""

    name: str
    decode_map: tuple[int, ...] = field(repr=False)  # 256 entries, UNDEFINED (-1) where unmapped
    encode_map: Mapping[int, int] = field(repr=False)
    version: int = 1
    decoding_string: str = field(init=False, repr=False, compare=False)
    charmap: object = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.decode_map) != 256:
            raise ValueError(f"{self.name}: table must have 256 rows, got {len(self.decode_map)}")
        s = "".join(_UNDEF_CHAR if cp == UNDEFINED else chr(cp) for cp in self.decode_map)
        object.__setattr__(self, "decoding_string", s)
        object.__setattr__(self, "charmap", _stdlib_codecs.charmap_build(s))

    @classmethod
    def from_decode_map(cls, name: str, decode_map: Sequence[int], version: int = 1) -> CodecTable:
        # A few vendor tables (cp875, cp1006) map several bytes to one
        # codepoint; the highest byte wins, as in the stdlib charmap builder.
        encode = {}
        for b, cp in enumerate(decode_map):
            if cp != UNDEFINED:
                encode[cp] = b
        return cls(name, tuple(decode_map), MappingProxyType(encode), version)

    def defined_bytes(self) -> list[int]:
        return [b for b, cp in enumerate(self.decode_map) if cp != UNDEFINED]

    def shadowed_bytes(self) -> list[int]:
        """Defined bytes that do not round-trip because another byte shares their codepoint."""
        return [b for b, cp in enumerate(self.decode_map) if cp != UNDEFINED and self.encode_map[cp] != b]


# -- catalog ---------------------------------------------------------------

_TOP_SINGLE_BYTE = ("cp1252", "latin_1", "cp1250", "cp1251", "cp1254", "mac_roman")

_UTF_ORDER = (
    "utf_8", "utf_16_le", "utf_16_be", "utf_32_le", "utf_32_be",
    "utf_16", "utf_32", "utf_8_sig", "utf_7",
)

MULTI_BYTE_NAMES = (
    "big5", "big5hkscs", "cp932", "cp949", "cp950", "euc_jp", "euc_jis_2004",
    "euc_jisx0213", "euc_kr", "gb2312", "gbk", "gb18030", "hz", "iso2022_jp",
    "iso2022_jp_1", "iso2022_jp_2", "iso2022_jp_2004", "iso2022_jp_3",
    "iso2022_jp_ext", "iso2022_kr", "johab", "shift_jis", "shift_jis_2004",
    "shift_jisx0213",
)

# Spellings found in published codec lists that are not real codec names.
ALIASES = {
    "eur_jp": "euc_jp",
    "eur_jis_2004": "euc_jis_2004",
    "eur_jisx0213": "euc_jisx0213",
    "eur_kr": "euc_kr",
    "latin1": "latin_1",
    "iso8859_1": "latin_1",
    "iso_8859_1": "latin_1",
    "utf8": "utf_8",
    "windows_1252": "cp1252",
    "macroman": "mac_roman",
}

_STDLIB_UTF = {
    "utf_8": "utf-8",
    "utf_8_sig": "utf-8-sig",
    "utf_16_le": "utf-16-le",
    "utf_16_be": "utf-16-be",
    "utf_32_le": "utf-32-le",
    "utf_32_be": "utf-32-be",
    "utf_7": "utf-7",
}

_tables: dict[str, CodecTable] = {}
_extra_tables: dict[str, CodecTable] = {}
_generation = [0]  # bumped whenever the catalog changes


def catalog_generation() -> int:
    """Changes whenever :func:`register_table` alters the catalog (for caches)."""
    return _generation[0]


def _normalize(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    return ALIASES.get(key, key)


def load_table(path: str | Path) -> CodecTable:
    """Parse a ``.tbl`` file into a :class:`CodecTable`."""
    path = Path(path)
    return _parse_table(path.read_text(encoding="ascii"), default_name=path.stem)


def _parse_table(text: str, default_name: str) -> CodecTable:
    name, version = default_name, 1
    decode = [UNDEFINED] * 256
    seen = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            if key.strip() == "codec":
                name = value.strip()
            elif key.strip() == "version":
                version = int(value)
            continue
        try:
            byte_s, cp_s = line.split()
            b = int(byte_s, 16)
            decode[b] = UNDEFINED if cp_s == "UNDEF" else int(cp_s, 16)
        except (ValueError, IndexError) as exc:
            raise ValueError(f"{default_name}:{lineno}: bad table row {line!r}") from exc
        seen.add(b)
    if len(seen) != 256:
        raise ValueError(f"{default_name}: expected 256 rows, got {len(seen)}")
    return CodecTable.from_decode_map(_normalize(name), decode, version)


def _bundled_single_byte() -> dict[str, CodecTable]:
    if not _tables:
        root = resources.files("demojibake") / "data" / "codecs"
        for entry in root.iterdir():
            if entry.name.endswith(".tbl"):
                table = _parse_table(entry.read_text(encoding="ascii"), entry.name[:-4])
                _tables[table.name] = table
    return _tables


def register_table(path_or_table: str | Path | CodecTable) -> CodecId:
    """Add a third-party single-byte table to the catalog."""
    table = path_or_table if isinstance(path_or_table, CodecTable) else load_table(path_or_table)
    _extra_tables[table.name] = table
    _generation[0] += 1
    for cached in (_catalog, _lookup, strict_decoder, strict_encoder, is_ascii_compatible):
        cached.cache_clear()
    return CodecId(table.name, Kind.SINGLE_BYTE)


def unregister_table(name: str) -> None:
    """Remove a table added with :func:`register_table` (bundled ones stay)."""
    if _extra_tables.pop(_normalize(name), None) is not None:
        _generation[0] += 1
        for cached in (_catalog, _lookup, strict_decoder, strict_encoder, is_ascii_compatible):
            cached.cache_clear()


def _single_byte_tables() -> dict[str, CodecTable]:
    return {**_bundled_single_byte(), **_extra_tables}


@lru_cache(maxsize=None)
def _catalog(multibyte: bool) -> tuple[CodecId, ...]:
    singles = _single_byte_tables()
    rest = sorted(n for n in singles if n not in _TOP_SINGLE_BYTE)
    ordered = [CodecId(n, Kind.SINGLE_BYTE) for n in (*_TOP_SINGLE_BYTE, *rest) if n in singles]
    ordered += [CodecId(n, Kind.UTF_FAMILY) for n in _UTF_ORDER]
    if multibyte:
        ordered += [CodecId(n, Kind.MULTI_BYTE) for n in MULTI_BYTE_NAMES]
    return tuple(ordered)


def list_codecs(multibyte: bool = False) -> list[CodecId]:
    """All supported codecs in repair priority order.

    The order is the file-encoding priority used by the repair search:
    the common Western/Cyrillic code pages first, the remaining single-byte
    codecs alphabetically, then the UTF family, then (optionally) multi-byte.
    """
    return list(_catalog(multibyte))


def unsupported_codecs(multibyte: bool = False) -> list[str]:
    """Published codec names that :func:`list_codecs` does not return."""
    if multibyte:
        return []
    aliased = [a for a, target in ALIASES.items() if target in MULTI_BYTE_NAMES]
    return [*MULTI_BYTE_NAMES, *aliased]


# Source-encoding priority: UTF flavours first, then everything else.
SOURCE_PRIORITY = ("utf_8", "utf_16_le", "utf_16_be", "utf_32_le", "utf_32_be")
FILE_PRIORITY = _TOP_SINGLE_BYTE


@lru_cache(maxsize=None)
def _lookup(codec: str, multibyte: bool) -> CodecId:
    name = _normalize(codec)
    for c in _catalog(multibyte):
        if c.name == name:
            return c
    raise LookupError(f"unknown codec: {codec!r}")


def get_codec(codec: str | CodecId, multibyte: bool = True) -> CodecId:
    if isinstance(codec, CodecId):
        return codec
    return _lookup(codec, multibyte)


def codec_table(codec: str | CodecId) -> CodecTable:
    c = get_codec(codec)
    if c.kind is not Kind.SINGLE_BYTE:
        raise TypeError(f"{c.name} is not a single-byte codec")
    return _single_byte_tables()[c.name]


@lru_cache(maxsize=None)
def is_ascii_compatible(codec: str | CodecId) -> bool:
    """True when bytes 0x00-0x7F decode to themselves."""
    c = get_codec(codec)
    if c.kind is Kind.SINGLE_BYTE:
        return codec_table(c).decode_map[:128] == tuple(range(128))
    return c.name in ("utf_8", "utf_8_sig")


# -- primitives ------------------------------------------------------------

def _policy(policy) -> str:
    return Policy(policy).value


def _decode_utf_bom(data: bytes, errors: str, width: int) -> str:
    le, be = ("utf-16-le", "utf-16-be") if width == 2 else ("utf-32-le", "utf-32-be")
    bom_le = b"\xff\xfe" if width == 2 else b"\xff\xfe\x00\x00"
    bom_be = b"\xfe\xff" if width == 2 else b"\x00\x00\xfe\xff"
    if data.startswith(bom_le):
        return data[len(bom_le):].decode(le, errors)
    if data.startswith(bom_be):
        return data[len(bom_be):].decode(be, errors)
    return data.decode(le, errors)


def _raw_decode(data: bytes, c: CodecId, errors: str) -> str:
    if c.kind is Kind.SINGLE_BYTE:
        return _stdlib_codecs.charmap_decode(data, errors, codec_table(c).decoding_string)[0]
    if c.name == "utf_16":
        return _decode_utf_bom(data, errors, 2)
    if c.name == "utf_32":
        return _decode_utf_bom(data, errors, 4)
    return data.decode(_STDLIB_UTF.get(c.name, c.name), errors)


def _raw_encode(text: str, c: CodecId, errors: str) -> bytes:
    if c.kind is Kind.SINGLE_BYTE:
        return _stdlib_codecs.charmap_encode(text, errors, codec_table(c).charmap)[0]
    if c.name == "utf_16":
        return b"\xff\xfe" + text.encode("utf-16-le", errors)
    if c.name == "utf_32":
        return b"\xff\xfe\x00\x00" + text.encode("utf-32-le", errors)
    return text.encode(_STDLIB_UTF.get(c.name, c.name), errors)


@lru_cache(maxsize=None)
def strict_decoder(codec: str | CodecId) -> Callable[[bytes], str]:
    """Fast strict decode function for hot loops; raises ``UnicodeError``."""
    c = get_codec(codec)
    if c.kind is Kind.SINGLE_BYTE:
        table = codec_table(c).decoding_string
        charmap_decode = _stdlib_codecs.charmap_decode
        return lambda data: charmap_decode(data, "strict", table)[0]
    return lambda data: _raw_decode(data, c, "strict")


@lru_cache(maxsize=None)
def strict_encoder(codec: str | CodecId) -> Callable[[str], bytes]:
    """Fast strict encode function for hot loops; raises ``UnicodeError``."""
    c = get_codec(codec)
    if c.kind is Kind.SINGLE_BYTE:
        table = codec_table(c).charmap
        charmap_encode = _stdlib_codecs.charmap_encode
        return lambda text: charmap_encode(text, "strict", table)[0]
    return lambda text: _raw_encode(text, c, "strict")


def decode_bytes(data: bytes, codec: str | CodecId, policy: Policy | str = Policy.STRICT) -> tuple[str, Status]:
    """Decode ``data`` with ``codec``.

    Returns ``(text, status)`` where status is CLEAN when every byte mapped and
    LOSSY when ``replace``/``ignore`` had to step in.  Under ``strict`` an
    unmappable byte raises :class:`CodecError` instead.
    """
    c = get_codec(codec)
    data = bytes(data)
    try:
        return _raw_decode(data, c, "strict"), Status.CLEAN
    except UnicodeError as exc:
        if _policy(policy) == "strict":
            raise CodecError(c.name, "decode", getattr(exc, "start", 0), getattr(exc, "reason", str(exc))) from None
    return _raw_decode(data, c, _policy(policy)), Status.LOSSY


def encode_text(text: str, codec: str | CodecId, policy: Policy | str = Policy.STRICT) -> tuple[bytes, Status]:
    """Encode ``text`` with ``codec``; same status/raise contract as :func:`decode_bytes`."""
    c = get_codec(codec)
    try:
        return _raw_encode(text, c, "strict"), Status.CLEAN
    except UnicodeError as exc:
        if _policy(policy) == "strict":
            raise CodecError(c.name, "encode", getattr(exc, "start", 0), getattr(exc, "reason", str(exc))) from None
    return _raw_encode(text, c, _policy(policy)), Status.LOSSY


def transcode(text: str, via: str | CodecId, as_: str | CodecId, policy: Policy | str = Policy.STRICT) -> tuple[str, Status]:
    """Re-interpret ``text``: encode it with ``via`` and decode the bytes with ``as_``.

    This is the only repair primitive; corruption is the same operation with
    the codecs swapped.
    """
    data, s1 = encode_text(text, via, policy)
    out, s2 = decode_bytes(data, as_, policy)
    return out, Status.LOSSY if Status.LOSSY in (s1, s2) else Status.CLEAN
