"""
Versioned binary blobs for structures and protocol advice.

Layout::

    b"CILP" | version (u8) | kind (length-prefixed utf-8) | section count (u32)
    then per section: name (length-prefixed utf-8) | payload length (u32) | payload

Counts are little-endian ``u32``/``u64``; integers and rationals are decimal
strings (``"p/q"`` for rationals) so arbitrary precision survives.
"""

import struct
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from core.exceptions import BlobFormatError

MAGIC = b"CILP"
BLOB_VERSION = 1

_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")


class Encoder:
    """Append-only field writer for one section payload."""

    def __init__(self) -> None:
        self._parts: List[bytes] = []

    def fixed(self, value: bytes) -> "Encoder":
        self._parts.append(bytes(value))
        return self

    def u32(self, value: int) -> "Encoder":
        return self.fixed(_U32.pack(value))

    def count(self, value: int) -> "Encoder":
        return self.fixed(_U64.pack(value))

    def counts(self, values: Iterable[int]) -> "Encoder":
        values = list(values)
        self.count(len(values))
        return self.fixed(struct.pack(f"<{len(values)}Q", *values))

    def text(self, value: str) -> "Encoder":
        return self.raw(value.encode("utf-8"))

    def raw(self, value: bytes) -> "Encoder":
        return self.u32(len(value)).fixed(value)

    def integer(self, value: int) -> "Encoder":
        return self.text(str(value))

    def integers(self, values: Iterable[int]) -> "Encoder":
        values = list(values)
        self.count(len(values))
        for v in values:
            self.integer(v)
        return self

    def rational(self, value: Fraction) -> "Encoder":
        value = Fraction(value)
        return self.text(f"{value.numerator}/{value.denominator}")

    def to_bytes(self) -> bytes:
        return b"".join(self._parts)


class Decoder:
    """Sequential reader matching ``Encoder``."""

    def __init__(self, data: bytes, what: str = "section") -> None:
        self._data = memoryview(data)
        self._pos = 0
        self._what = what

    def _take(self, size: int) -> memoryview:
        if self._pos + size > len(self._data):
            raise BlobFormatError(f"{self._what} truncated at byte {self._pos}")
        chunk = self._data[self._pos : self._pos + size]
        self._pos += size
        return chunk

    def take_fixed(self, size: int) -> bytes:
        return bytes(self._take(size))

    def u32(self) -> int:
        return _U32.unpack(self._take(_U32.size))[0]

    def count(self) -> int:
        return _U64.unpack(self._take(_U64.size))[0]

    def counts(self) -> Tuple[int, ...]:
        size = self.count()
        return struct.unpack(f"<{size}Q", self._take(8 * size))

    def raw(self) -> bytes:
        size = self.u32()
        return bytes(self._take(size))

    def text(self) -> str:
        return self.raw().decode("utf-8")

    def integer(self) -> int:
        return int(self.text())

    def integers(self) -> Tuple[int, ...]:
        return tuple(self.integer() for _ in range(self.count()))

    def rational(self) -> Fraction:
        return Fraction(self.text())

    def done(self) -> None:
        if self._pos != len(self._data):
            raise BlobFormatError(f"{self._what} has {len(self._data) - self._pos} trailing bytes")


def pack_sections(kind: str, sections: Dict[str, bytes]) -> bytes:
    """Wrap named payloads in a versioned blob; sections keep insertion order."""
    out = Encoder()
    out.fixed(MAGIC + bytes([BLOB_VERSION]))
    out.text(kind)
    out.u32(len(sections))
    for name, payload in sections.items():
        out.text(name)
        out.raw(payload)
    return out.to_bytes()


def unpack_sections(data: bytes, kind: Optional[str] = None) -> Dict[str, bytes]:
    """
    Inverse of ``pack_sections``.

    Raises:
        BlobFormatError: Bad magic, unknown version, kind mismatch or truncation
    """
    if len(data) < 5 or data[:4] != MAGIC:
        raise BlobFormatError("not a compact-ilp blob")
    if data[4] != BLOB_VERSION:
        raise BlobFormatError(f"unsupported blob version {data[4]}")
    reader = Decoder(data[5:], "blob")
    found = reader.text()
    if kind is not None and found != kind:
        raise BlobFormatError(f"expected a '{kind}' blob, found '{found}'")
    total = reader.u32()
    sections = {}
    for _ in range(total):
        name = reader.text()
        sections[name] = reader.raw()
    reader.done()
    return sections
