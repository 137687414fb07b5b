"""Single-file serialization of a built index and loss-free reload.

Byte layout (all integers little-endian, fixed width unless noted):

    magic        5 bytes  b"ETIDX"
    version      u16
    body_len     u64
    body         body_len bytes (see below)
    checksum     u32      crc32 of body

Body:

    mode u8 (0 dictionary, 1 text) | k u8 | m u32 (0 = none)
    levels_built u8 | indels_built u8
    alphabet: name str16 | symbols str32 | wildcard str8
    n_sequences u32
    per sequence: id u32 | data str32
    kst: n_nodes u32, then per node sorted by key:
        key u32 | parent u32 (0xFFFFFFFF = none) | seq i32 | start u32 | end u32
    skeleton: n_nodes u32, then per node sorted by key:
        key u32 | parent u32 | seq i32 | start u32 | length u32
        | n_labels u32 | labels u32 each
    tables: n_records u64, then per record sorted by (owner, kind, level, parts):
        owner u32 | kind u8 (0 sub, 1 ins, 2 edit) | level u8
        | parts u64 each | bucket: n u32 + delta-encoded varints

strN is a length-prefixed UTF-8 string with an N-bit length. Suffix-tree
leaf labels, depths and heavy children are recomputed on load; the loaded
index is frozen and answers queries without any rebuild.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

from .alphabet import Alphabet, Sequence
from .error_tree import BUCKET, DICTIONARY, TEXT, ErrorTree, EtNode, Skeleton
from .errors import ChecksumError, FormatError, VersionError
from .suffix_tree import KeyedSuffixTree, KstNode

MAGIC = b"ETIDX"
FORMAT_VERSION = 1
_NONE = 0xFFFFFFFF

_KINDS = {"sub": 0, "ins": 1, "edit": 2}


class _Writer:
    def __init__(self) -> None:
        self.parts: list[bytes] = []

    def u8(self, v: int) -> None:
        self.parts.append(struct.pack("<B", v))

    def u16(self, v: int) -> None:
        self.parts.append(struct.pack("<H", v))

    def u32(self, v: int) -> None:
        self.parts.append(struct.pack("<I", v))

    def i32(self, v: int) -> None:
        self.parts.append(struct.pack("<i", v))

    def u64(self, v: int) -> None:
        self.parts.append(struct.pack("<Q", v))

    def varint(self, v: int) -> None:
        out = bytearray()
        while True:
            b = v & 0x7F
            v >>= 7
            out.append(b | (0x80 if v else 0))
            if not v:
                break
        self.parts.append(bytes(out))

    def string(self, s: str, width: int = 32) -> None:
        raw = s.encode("utf-8")
        if width == 8:
            self.u8(len(raw))
        elif width == 16:
            self.u16(len(raw))
        else:
            self.u32(len(raw))
        self.parts.append(raw)

    def blob(self) -> bytes:
        return b"".join(self.parts)


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def _take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise FormatError("truncated image body")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u8(self) -> int:
        return self._take(1)[0]

    def u16(self) -> int:
        return struct.unpack("<H", self._take(2))[0]

    def u32(self) -> int:
        return struct.unpack("<I", self._take(4))[0]

    def i32(self) -> int:
        return struct.unpack("<i", self._take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self._take(8))[0]

    def varint(self) -> int:
        shift = 0
        out = 0
        while True:
            b = self.u8()
            out |= (b & 0x7F) << shift
            if not b & 0x80:
                return out
            shift += 7

    def string(self, width: int = 32) -> str:
        if width == 8:
            n = self.u8()
        elif width == 16:
            n = self.u16()
        else:
            n = self.u32()
        return self._take(n).decode("utf-8")


def save(index: ErrorTree, destination: str | Path) -> int:
    """Write the index image; returns the byte count. Deterministic."""
    w = _Writer()
    w.u8(0 if index.mode == DICTIONARY else 1)
    w.u8(index.k)
    w.u32(index.m or 0)
    w.u8(index.levels_built)
    w.u8(1 if index.indels_built else 0)
    w.string(index.alphabet.name, 16)
    w.string(index.alphabet.symbols, 32)
    w.string(index.alphabet.wildcard, 8)

    w.u32(len(index.sequences))
    for seq in index.sequences:
        w.u32(seq.id)
        w.string(seq.data, 32)

    kst_nodes = sorted(index.kst.nodes.values(), key=lambda n: n.key)
    w.u32(len(kst_nodes))
    for node in kst_nodes:
        w.u32(node.key)
        w.u32(node.parent.key if node.parent is not None else _NONE)
        w.i32(node.seq)
        w.u32(node.start)
        w.u32(node.end if node.end is not None else 0)

    sk_nodes = sorted(index.skeleton.nodes.values(), key=lambda n: n.key)
    w.u32(len(sk_nodes))
    for node in sk_nodes:
        w.u32(node.key)
        w.u32(node.parent.key if node.parent is not None else _NONE)
        w.i32(node.seq)
        w.u32(node.start)
        w.u32(node.length)
        w.u32(len(node.labels))
        for label in sorted(node.labels):
            w.u32(label)

    records = sorted(
        (owner, _KINDS[kind], level, parts, bucket)
        for owner, kind, level, parts, bucket in index.iter_tuples()
    )
    w.u64(len(records))
    for owner, kind, level, parts, bucket in records:
        w.u32(owner)
        w.u8(kind)
        w.u8(level)
        for part in parts:
            w.u64(part)
        w.u32(len(bucket))
        prev = 0
        for leaf_key in bucket:
            w.varint(leaf_key - prev)
            prev = leaf_key

    body = w.blob()
    image = MAGIC + struct.pack("<H", FORMAT_VERSION) + struct.pack("<Q", len(body)) + body
    image += struct.pack("<I", zlib.crc32(body) & 0xFFFFFFFF)
    Path(destination).write_bytes(image)
    return len(image)


def load(source: str | Path) -> ErrorTree:
    """Reload an image into a fully queryable, frozen index."""
    data = Path(source).read_bytes()
    if len(data) < 19 or data[:5] != MAGIC:
        raise FormatError("not an error-tree index image (bad magic)")
    version = struct.unpack("<H", data[5:7])[0]
    if version > FORMAT_VERSION:
        raise VersionError(f"image format v{version} is newer than supported v{FORMAT_VERSION}")
    body_len = struct.unpack("<Q", data[7:15])[0]
    if len(data) < 15 + body_len + 4:
        raise ChecksumError("image is truncated")
    body = data[15 : 15 + body_len]
    stored_crc = struct.unpack("<I", data[15 + body_len : 19 + body_len])[0]
    if zlib.crc32(body) & 0xFFFFFFFF != stored_crc:
        raise ChecksumError("image body does not match its checksum")

    r = _Reader(body)
    mode = DICTIONARY if r.u8() == 0 else TEXT
    k = r.u8()
    m = r.u32() or None
    levels_built = r.u8()
    indels_built = bool(r.u8())
    alphabet = Alphabet(r.string(16), r.string(32), r.string(8))

    sequences = []
    for _ in range(r.u32()):
        sid = r.u32()
        sequences.append(Sequence(sid, r.string(32)))

    kst = KeyedSuffixTree(sequences)
    kst.nodes.clear()
    parents: dict[int, int] = {}
    for _ in range(r.u32()):
        key = r.u32()
        parent = r.u32()
        seq = r.i32()
        start = r.u32()
        end = r.u32()
        node = KstNode(key, seq, start, end, None)
        kst.nodes[key] = node
        if parent != _NONE:
            parents[key] = parent
        else:
            kst.root = node
            node.end = 0
    for key, pkey in parents.items():
        node = kst.nodes[key]
        parent = kst.nodes[pkey]
        node.parent = parent
        parent.children[kst.first_symbol(node)] = node
    kst._next_key = max(kst.nodes) + 1
    kst.finalize()
    kst.freeze()

    skeleton = Skeleton(sequences)
    skeleton.nodes.clear()
    sk_parents: dict[int, int] = {}
    sk_labels: dict[int, list[int]] = {}
    for _ in range(r.u32()):
        key = r.u32()
        parent = r.u32()
        seq = r.i32()
        start = r.u32()
        length = r.u32()
        labels = [r.u32() for _ in range(r.u32())]
        node = EtNode(key, seq, start, length, None)
        skeleton.nodes[key] = node
        sk_labels[key] = labels
        if parent != _NONE:
            sk_parents[key] = parent
        else:
            skeleton.root = node
    for key, pkey in sk_parents.items():
        node = skeleton.nodes[key]
        parent = skeleton.nodes[pkey]
        node.parent = parent
        parent.children[skeleton.first_symbol(node)] = node
    for key, labels in sk_labels.items():
        skeleton.nodes[key].labels = labels
    skeleton._next_key = max(skeleton.nodes) + 1
    skeleton.finalize()

    index = ErrorTree(mode, alphabet, sequences, kst, skeleton, k, m)
    index.levels_built = levels_built
    index.indels_built = indels_built

    for _ in range(r.u64()):
        owner = r.u32()
        _kind = r.u8()
        level = r.u8()
        parts = tuple(r.u64() for _ in range(level))
        count = r.u32()
        bucket = []
        prev = 0
        for _ in range(count):
            prev += r.varint()
            bucket.append(prev)
        node = skeleton.nodes[owner]
        if node.tables is None:
            node.tables = {}
        tab = node.tables
        for part in parts:
            sub = tab.get(part)
            if sub is None:
                sub = tab[part] = {}
            tab = sub
        tab[BUCKET] = bucket
    return index
