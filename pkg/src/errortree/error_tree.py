"""The error tree: a keyed compact trie (dictionary mode) or trimmed suffix
tree (text mode) whose internal nodes carry hash tables mapping error-key
tuples to descendant leaves.

An error key describes a hypothetical alignment of a query against a stored
string relative to one internal node: an ordered tuple of parts, one per
edit operation, where each part records the operation flavor (consume a
stored symbol, or insert into the gap before it) together with the canonical
suffix-tree location of the stored segment following that operation. The
location is the walk endpoint of the segment: either exactly at a node, or
tagged at-edge with the sink node of that edge (no offset is stored; the
verification filter absorbs the resulting over-grouping).

Tables exclude every leaf reachable through a node's heavy child (the child
subtree with the most descendant leaves); the query walks the heavy edge
instead. Tables are stored as one nested part-trie per node so probes can
prune by shared key prefixes; `iter_tuples` exposes the flat
(kind, level, parts, bucket) view where kind is "sub" for consume-only
tuples, "ins" for gap-only tuples and "edit" for mixed ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .alphabet import Alphabet, Sequence, TRIE_END, make_sequences
from .errors import InputError, ParameterError
from .suffix_tree import KeyedSuffixTree, build_gst

BUCKET = -1
FLAVOR_SUB = 0   # operation consumes the stored symbol (substitution/deletion)
FLAVOR_GAP = 1   # operation inserts before the stored position

DICTIONARY = "dictionary"
TEXT = "text"


def encode_part(loc: tuple[int, bool], flavor: int) -> int:
    key, at_edge = loc
    return (key << 2) | (int(at_edge) << 1) | flavor


def decode_part(part: int) -> tuple[int, bool, int]:
    return part >> 2, bool(part & 2), part & 1


class EtNode:
    __slots__ = ("key", "parent", "children", "seq", "start", "length", "depth",
                 "labels", "has_marker", "heavy", "n_leaves", "tables")

    def __init__(self, key: int, seq: int, start: int, length: int, parent: "EtNode | None"):
        self.key = key
        self.seq = seq
        self.start = start
        self.length = length
        self.parent = parent
        self.children: dict[str, EtNode] = {}
        self.depth = 0                  # symbol depth counting real symbols only
        self.labels: list[int] = []     # subject ids (dictionary) / start positions (text)
        self.has_marker = False         # incoming edge ends with the end marker
        self.heavy: str | None = None   # symbol of the child with most descendant leaves
        self.n_leaves = 0
        self.tables: dict | None = None

    def is_leaf(self) -> bool:
        return not self.children

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<EtNode {self.key} depth={self.depth} labels={self.labels}>"


class Skeleton:
    """Keyed compact trie over the stored strings (or the converted TST)."""

    def __init__(self, sequences: list[Sequence]):
        self.sequences = sequences
        self._next_key = 0
        self.root = self._new_node(-1, 0, 0, None)
        self.nodes: dict[int, EtNode] = {self.root.key: self.root}

    def _new_node(self, seq: int, start: int, length: int, parent: EtNode | None) -> EtNode:
        node = EtNode(self._next_key, seq, start, length, parent)
        self._next_key += 1
        return node

    def _sym(self, seq_id: int, idx: int) -> str:
        s = self.sequences[seq_id]
        return TRIE_END if idx >= s.length else s.data[idx]

    def edge_symbol(self, node: EtNode, offset: int) -> str:
        return self._sym(node.seq, node.start + offset)

    def first_symbol(self, node: EtNode) -> str:
        return self._sym(node.seq, node.start)

    def insert(self, seq: Sequence, label: int) -> None:
        """Insert seq's data plus the shared end marker; duplicates share a leaf."""
        padded = seq.length + 1
        node = self.root
        i = 0
        while True:
            if i == padded:
                node.labels.append(label)
                return
            child = node.children.get(self._sym(seq.id, i))
            if child is None:
                leaf = self._new_node(seq.id, i, padded - i, node)
                self.nodes[leaf.key] = leaf
                node.children[self._sym(seq.id, i)] = leaf
                leaf.labels.append(label)
                return
            j = 0
            while j < child.length and i < padded and self.edge_symbol(child, j) == self._sym(seq.id, i):
                i += 1
                j += 1
            if j == child.length:
                node = child
                continue
            mid = self._new_node(child.seq, child.start, j, node)
            self.nodes[mid.key] = mid
            node.children[self.first_symbol(child)] = mid
            child.start += j
            child.length -= j
            child.parent = mid
            mid.children[self.first_symbol(child)] = child
            node = mid

    def finalize(self) -> None:
        """Fill real depths, marker flags, leaf counts and heavy children."""
        order: list[EtNode] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            order.append(node)
            if node is not self.root:
                seq_len = self.sequences[node.seq].length if node.seq >= 0 else 0
                node.has_marker = node.start + node.length > seq_len
                real = node.length - (1 if node.has_marker else 0)
                node.depth = node.parent.depth + real
            for child in node.children.values():
                stack.append(child)
        for node in reversed(order):
            if node.is_leaf():
                node.n_leaves = 1
            else:
                node.n_leaves = sum(c.n_leaves for c in node.children.values())
                node.heavy = min(
                    node.children,
                    key=lambda sym: (-node.children[sym].n_leaves, sym),
                )

    def leaves(self) -> list[EtNode]:
        return [n for n in self.nodes.values() if n is not self.root and n.is_leaf()]

    def internal_nodes(self) -> list[EtNode]:
        return [n for n in self.nodes.values() if n.children]


def build_compact_trie(sequences: list[Sequence]) -> Skeleton:
    """Compacted, keyed trie of the string set; duplicate strings share a leaf."""
    if not sequences:
        raise ParameterError("empty dictionary")
    sk = Skeleton(sequences)
    for seq in sequences:
        sk.insert(seq, seq.id)
    sk.finalize()
    return sk


def skeleton_from_tst(tst: KeyedSuffixTree) -> Skeleton:
    """Re-express a trimmed suffix tree as an error-tree skeleton.

    Node keys are preserved; labels become 1-based text start positions.
    """
    sk = Skeleton(tst.sequences)
    sk.nodes.clear()
    sk._next_key = 0

    n = tst.sequences[0].length

    def convert(src, parent):
        node = EtNode(src.key, src.seq if src.seq >= 0 else 0,
                      src.start, tst.edge_length(src), parent)
        sk.nodes[node.key] = node
        # drop the empty-suffix label (start n+1): it names no window
        node.labels = sorted(start for (_seq, start) in src.leaf_labels if start <= n)
        return node

    sk.root = convert(tst.root, None)
    stack = [(tst.root, sk.root)]
    while stack:
        src, dst = stack.pop()
        for child in src.children.values():
            cnode = convert(child, dst)
            dst.children[sk.first_symbol(cnode)] = cnode
            stack.append((child, cnode))
    sk._next_key = max(sk.nodes) + 1
    sk.finalize()
    return sk


@dataclass
class TableStats:
    mode: str
    k: int
    m: int | None
    n_sequences: int
    total_symbols: int
    kst_nodes: int
    trie_nodes: int
    entries: dict[tuple[str, int], int] = field(default_factory=dict)
    total_entries: int = 0
    bucket_refs: int = 0
    approx_bytes: int = 0

    def as_dict(self) -> dict:
        flat = {f"{kind}_level_{lvl}": n for (kind, lvl), n in sorted(self.entries.items())}
        return {
            "mode": self.mode, "k": self.k, "m": self.m,
            "sequences": self.n_sequences, "symbols": self.total_symbols,
            "kst_nodes": self.kst_nodes, "trie_nodes": self.trie_nodes,
            "total_entries": self.total_entries, "bucket_refs": self.bucket_refs,
            "approx_bytes": self.approx_bytes, **flat,
        }


class ErrorTree:
    """A built index: skeleton plus companion suffix tree plus tables."""

    def __init__(self, mode: str, alphabet: Alphabet, sequences: list[Sequence],
                 kst: KeyedSuffixTree, skeleton: Skeleton, k: int, m: int | None):
        self.mode = mode
        self.alphabet = alphabet
        self.sequences = sequences
        self.kst = kst
        self.skeleton = skeleton
        self.k = k
        self.m = m
        self.levels_built = 0
        self.indels_built = False
        self.anchored = False
        # text-mode edit support stores extra tuple terminals cut at every
        # admissible window end (a window may stop before the trie depth)
        self.edit_cuts = False

    @property
    def text(self) -> str:
        return self.sequences[0].data

    # -- representatives ---------------------------------------------------

    def _leaf_rep(self, leaf: EtNode) -> tuple[int, int, int]:
        """(kst sequence id, base offset, stored length) for a leaf's string.

        Window position p (1-based, p <= stored length) corresponds to the
        indexed suffix (seq id, base + p) of the companion tree.
        """
        if self.mode == DICTIONARY:
            sid = min(leaf.labels)
            return sid, 0, self.sequences[sid].length
        start = min(leaf.labels)
        return 0, start - 1, leaf.depth

    def _segment_location(self, rep: tuple[int, int, int], start: int, length: int) -> tuple[int, bool]:
        seq_id, base, _ = rep
        return self.kst.location_in_suffix(seq_id, base + start, length)

    def _tail_location(self, rep: tuple[int, int, int], start: int) -> tuple[int, bool]:
        seq_id, base, total = rep
        if self.mode == DICTIONARY:
            return self.kst.tail_location(seq_id, base + start)
        return self.kst.location_in_suffix(seq_id, base + start, total - start + 1)

    def _ancestors_outside_heavy(self, leaf: EtNode) -> list[EtNode]:
        """Internal ancestors of leaf that do not reach it via their heavy child."""
        out = []
        child, node = leaf, leaf.parent
        while node is not None:
            if node.children[node.heavy] is not child:
                out.append(node)
            child, node = node, node.parent
        return out

    # -- table construction -------------------------------------------------

    def _insert_level(self, level: int, with_gaps: bool) -> None:
        """Insert all tuples of exactly `level` operations for every
        (internal node, non-heavy descendant leaf) pair.

        with_gaps False: consume-only tuples (the substitution tables).
        with_gaps True: only tuples containing at least one gap operation.
        """
        # In text mode a window may end before the trie depth at no cost, so
        # tuples also get terminal variants cut at every admissible window
        # end (>= m - k keeps them probe-reachable).
        cut_floor = (self.m or 0) - self.k if (self.mode == TEXT and self.edit_cuts) else None

        for leaf in self.skeleton.leaves():
            if not leaf.labels:
                continue
            rep = self._leaf_rep(leaf)
            total = rep[2]
            loc_cache: dict[tuple[int, int], tuple[int, bool]] = {}

            def seg_loc(start: int, length: int) -> tuple[int, bool]:
                key = (start, length)
                got = loc_cache.get(key)
                if got is None:
                    got = self._segment_location(rep, start, length)
                    loc_cache[key] = got
                return got

            leaf_key = leaf.key

            def add_terminal(tab: dict, part: int) -> None:
                sub = tab.get(part)
                if sub is None:
                    sub = tab[part] = {}
                bucket = sub.get(BUCKET)
                if bucket is None:
                    bucket = sub[BUCKET] = set()
                bucket.add(leaf_key)

            def rec(tab: dict, flavor: int, seg_start: int, used: int, gaps: int) -> None:
                # terminal: the segment runs to the end of the stored string
                if used == level and (gaps > 0 or not with_gaps):
                    add_terminal(tab, encode_part(self._tail_location(rep, seg_start), flavor))
                    if cut_floor is not None:
                        for end in range(max(seg_start - 1, cut_floor), total):
                            add_terminal(tab, encode_part(seg_loc(seg_start, end - seg_start + 1), flavor))
                    return
                if used >= level:
                    return
                # split: the segment ends just before the next operation
                for p in range(seg_start, total + 1):
                    part = encode_part(seg_loc(seg_start, p - seg_start), flavor)
                    sub = tab.get(part)
                    if sub is None:
                        sub = tab[part] = {}
                    rec(sub, FLAVOR_SUB, p + 1, used + 1, gaps)
                    if with_gaps:
                        rec(sub, FLAVOR_GAP, p, used + 1, gaps + 1)
                if with_gaps:
                    # trailing gap: insertion after the last stored symbol
                    part = encode_part(seg_loc(seg_start, total + 1 - seg_start), flavor)
                    sub = tab.get(part)
                    if sub is None:
                        sub = tab[part] = {}
                    rec(sub, FLAVOR_GAP, total + 1, used + 1, gaps + 1)

            for v in self._ancestors_outside_heavy(leaf):
                d = v.depth
                if v.tables is None:
                    v.tables = {}
                if d + 1 <= total:
                    rec(v.tables, FLAVOR_SUB, d + 2, 1, 0)
                if with_gaps:
                    rec(v.tables, FLAVOR_GAP, d + 1, 1, 1)

    def prune_empty_tables(self) -> None:
        for v in self.skeleton.internal_nodes():
            if v.tables is not None and not v.tables:
                v.tables = None

    def iter_tuples(self):
        """Yield (owner key, kind, level, parts, sorted bucket) for all tuples."""
        for v in sorted(self.skeleton.nodes.values(), key=lambda n: n.key):
            if not v.tables:
                continue
            stack = [(v.tables, ())]
            while stack:
                tab, parts = stack.pop()
                for part, sub in tab.items():
                    if part == BUCKET:
                        flavors = {p & 1 for p in parts}
                        if flavors == {FLAVOR_SUB}:
                            kind = "sub"
                        elif flavors == {FLAVOR_GAP}:
                            kind = "ins"
                        else:
                            kind = "edit"
                        yield v.key, kind, len(parts), parts, sorted(sub)
                    else:
                        stack.append((sub, parts + (part,)))

    def freeze(self) -> None:
        """Sort every bucket for deterministic iteration and serialization."""
        for v in self.skeleton.nodes.values():
            if not v.tables:
                continue
            stack = [v.tables]
            while stack:
                tab = stack.pop()
                for part, sub in tab.items():
                    if part == BUCKET:
                        tab[BUCKET] = sorted(sub)
                    else:
                        stack.append(sub)
        self.kst.freeze()


def build_level_1(et: ErrorTree) -> ErrorTree:
    """Level-1 substitution tables: one tail entry per (node, non-heavy leaf)."""
    if et.levels_built >= 1:
        return et
    et._insert_level(1, with_gaps=False)
    et.levels_built = 1
    return et


def build_level_k(et: ErrorTree, k: int) -> ErrorTree:
    """Substitution tables for level k; levels 1..k-1 must already be built."""
    if k == 1:
        return build_level_1(et)
    if et.levels_built != k - 1:
        raise ParameterError(f"levels 1..{k - 1} must be built before level {k}")
    et._insert_level(k, with_gaps=False)
    et.levels_built = k
    return et


def anchor_shifted_tails(et: ErrorTree, k: int) -> bool:
    """Leaf-anchoring preprocessing for indels: every considered tail start
    gets keyed anchor leaves 1..k levels above its end in the companion tree.

    Must run before any table keys are computed, because edge splits change
    canonical locations. Returns True when the tree was modified.
    """
    if et.kst.frozen:
        return False
    before = len(et.kst.nodes)
    seen: set[tuple[int, int]] = set()
    for leaf in et.skeleton.leaves():
        if not leaf.labels:
            continue
        seq_id, base, total = et._leaf_rep(leaf)
        for v in et._ancestors_outside_heavy(leaf):
            for start in (v.depth + 1, v.depth + 2):
                if start > total:
                    continue
                ref = (seq_id, base + start)
                if ref in seen:
                    continue
                seen.add(ref)
                for levels_up in range(1, k + 1):
                    et.kst.ensure_leaf_at(ref, levels_up)
    et.anchored = True
    return len(et.kst.nodes) != before


def build_indel_tables(et: ErrorTree, k: int) -> ErrorTree:
    """Insertion-shifted and mixed-operation tables for budgets 1..k.

    Runs the leaf-anchoring preprocessing first; if that splits edges after
    substitution tables were already keyed, those tables are rebuilt on the
    final tree shape (canonical locations must all come from one tree).
    Then stores every tuple containing at least one gap operation.
    Idempotent.
    """
    if k == 0:
        return et
    if et.levels_built < k:
        raise ParameterError("substitution tables must be built first")
    if et.indels_built:
        return et
    changed = False
    if not et.anchored:
        changed = anchor_shifted_tails(et, k)
    if et.mode == TEXT and not et.edit_cuts:
        et.edit_cuts = True
        changed = True
    if changed:
        for node in et.skeleton.nodes.values():
            node.tables = None
        et.levels_built = 0
        for level in range(1, k + 1):
            build_level_k(et, level)
    for level in range(1, k + 1):
        et._insert_level(level, with_gaps=True)
    et.indels_built = True
    return et


def stats(et: ErrorTree) -> TableStats:
    """Node counts, per-level table entry counts and an estimated byte size."""
    out = TableStats(
        mode=et.mode,
        k=et.k,
        m=et.m,
        n_sequences=len(et.sequences) if et.mode == DICTIONARY else 1,
        total_symbols=sum(s.length for s in et.sequences),
        kst_nodes=len(et.kst.nodes),
        trie_nodes=len(et.skeleton.nodes),
    )
    for _owner, kind, level, parts, bucket in et.iter_tuples():
        key = (kind, level)
        out.entries[key] = out.entries.get(key, 0) + 1
        out.total_entries += 1
        out.bucket_refs += len(bucket)
        out.approx_bytes += 8 * len(parts) + 8 * len(bucket) + 64
    return out


def growth_ratio(st: TableStats, alphabet_size: int) -> float:
    """total entries / (N * log_sigma N * (log_sigma n)^(k-1) / k!).

    The empirical check target for the construction-size claim.
    """
    n_strings = st.n_sequences
    n_symbols = max(st.total_symbols, 2)
    if st.total_entries == 0:
        return 0.0
    log_n_strings = max(math.log(max(n_strings, 2), alphabet_size), 1e-9)
    log_n_symbols = max(math.log(n_symbols, alphabet_size), 1e-9)
    k = max(st.k, 1)
    denom = n_strings * log_n_strings * (log_n_symbols ** (k - 1)) / math.factorial(k)
    return st.total_entries / denom


def build_dictionary_index(strings: list[str], k: int, alphabet: Alphabet,
                           indels: bool = False) -> ErrorTree:
    """Build the full dictionary-mode index with error budget k."""
    if k < 0:
        raise ParameterError("k must be >= 0")
    sequences = make_sequences(strings, alphabet)
    kst = build_gst(sequences)
    skeleton = build_compact_trie(sequences)
    et = ErrorTree(DICTIONARY, alphabet, sequences, kst, skeleton, k, None)
    if indels and k > 0:
        anchor_shifted_tails(et, k)
    for level in range(1, k + 1):
        build_level_k(et, level)
    if indels and k > 0:
        build_indel_tables(et, k)
    et.prune_empty_tables()
    et.freeze()
    return et


def build_text_index(text: str, m: int, k: int, alphabet: Alphabet,
                     indels: bool = False) -> ErrorTree:
    """Build the text-mode index: trimmed suffix tree skeleton of depth m."""
    if k < 0:
        raise ParameterError("k must be >= 0")
    if m < 1:
        raise ParameterError("m must be >= 1")
    if not text:
        raise InputError("empty text")
    alphabet.validate(text, what="text")
    sequences = [Sequence(0, text)]
    kst = build_gst(sequences)
    tst = build_gst([Sequence(0, text)]).trim_to_depth(m)
    skeleton = skeleton_from_tst(tst)
    et = ErrorTree(TEXT, alphabet, sequences, kst, skeleton, k, m)
    if indels and k > 0:
        et.edit_cuts = True
        anchor_shifted_tails(et, k)
    for level in range(1, k + 1):
        build_level_k(et, level)
    if indels and k > 0:
        build_indel_tables(et, k)
    et.prune_empty_tables()
    et.freeze()
    return et
