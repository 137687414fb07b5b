"""Keyed generalized suffix tree with walk traces.

Construction is Ukkonen's online algorithm run per sequence over a shared
tree, with one unique terminator per sequence, so total work stays linear
in the input. Every node (internal and leaf) carries a unique integer key
assigned in creation order.

Walks return traces listing visited node keys and consumed edge lengths.
`avnj` additionally permits up to k "jumps": a mid-edge mismatch consumes
the query symbol without matching it. Jumps are never taken at nodes.

Positions are 1-based in every public signature; internal edge indices
are 0-based into the padded (terminated) sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .alphabet import ANCHOR_MARK, Sequence
from .errors import ParameterError, SuffixLookupError

AT_NODE = "at-node"
AT_EDGE = "at-edge"
FELL_OFF = "fell-off"

_MARKER_SEQ = -1


class KstNode:
    __slots__ = ("key", "parent", "seq", "start", "end", "children", "link", "symbol_depth", "leaf_labels")

    def __init__(self, key: int, seq: int, start: int, end: int | None, parent: "KstNode | None" = None):
        self.key = key
        self.seq = seq          # sequence owning the incoming edge label
        self.start = start      # 0-based start into the padded sequence
        self.end = end          # exclusive; None while a leaf is still growing
        self.parent = parent
        self.children: dict[str, KstNode] = {}
        self.link: KstNode | None = None
        self.symbol_depth = 0
        self.leaf_labels: list[tuple[int, int]] = []

    def is_leaf(self) -> bool:
        return not self.children

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<KstNode {self.key} depth={self.symbol_depth} labels={self.leaf_labels}>"


@dataclass
class WalkTrace:
    """Ordered record of one walk: (value, tag) entries plus jump positions.

    When a walk ends mid-edge the sink node of that edge is appended as a
    trailing at-node entry (terminal == "at-edge"), so the trace always
    names the canonical location where the string ran out.
    """

    entries: list[tuple[int, str]] = field(default_factory=list)
    jumps: list[int] = field(default_factory=list)
    matched_len: int = 0
    terminal: str = AT_NODE
    edge_sink: int | None = None

    def last_node_key(self) -> int:
        for value, tag in reversed(self.entries):
            if tag == AT_NODE:
                return value
        raise ValueError("trace has no node entries")


class KeyedSuffixTree:
    """Generalized suffix tree whose every node has a unique integer key."""

    def __init__(self, sequences: list[Sequence]):
        self.sequences = sequences
        self._next_key = 0
        self.root = self._new_node(_MARKER_SEQ, 0, 0, None)
        self.nodes: dict[int, KstNode] = {self.root.key: self.root}
        self.leaf_map: dict[tuple[int, int], int] = {}
        self.frozen = False
        self._path_cache: dict[tuple[int, int], tuple[list[int], list[int]]] = {}

    # -- construction -----------------------------------------------------

    def _new_node(self, seq: int, start: int, end: int | None, parent: KstNode | None) -> KstNode:
        node = KstNode(self._next_key, seq, start, end, parent)
        self._next_key += 1
        return node

    def _padded_len(self, seq_id: int) -> int:
        return self.sequences[seq_id].length + 1

    def _sym(self, seq_id: int, idx: int) -> str:
        if seq_id == _MARKER_SEQ:
            return ANCHOR_MARK
        s = self.sequences[seq_id]
        if idx == s.length:
            return s.terminator
        return s.data[idx]

    def edge_length(self, node: KstNode) -> int:
        return (node.end if node.end is not None else self._padded_len(node.seq)) - node.start

    def edge_symbol(self, node: KstNode, offset: int) -> str:
        """Symbol at 0-based offset within the node's incoming edge."""
        return self._sym(node.seq, node.start + offset)

    def first_symbol(self, node: KstNode) -> str:
        return self._sym(node.seq, node.start)

    def add_sequence(self, seq: Sequence) -> None:
        """Ukkonen extension of the shared tree by one terminated sequence."""
        if self.frozen:
            raise ParameterError("tree is frozen")
        sid = seq.id
        data = seq.data + seq.terminator
        n = len(data)
        active_node = self.root
        active_edge = 0          # index into data of the active edge's first symbol
        active_length = 0
        remainder = 0
        new_leaves: list[KstNode] = []

        def edge_len_now(node: KstNode, pos: int) -> int:
            if node.end is None:
                # growing leaf of the current sequence
                return pos + 1 - node.start
            return node.end - node.start

        for pos in range(n):
            c = data[pos]
            remainder += 1
            last_internal: KstNode | None = None
            while remainder > 0:
                if active_length == 0:
                    active_edge = pos
                child = active_node.children.get(data[active_edge])
                if child is None:
                    leaf = self._new_node(sid, pos, None, active_node)
                    active_node.children[data[active_edge]] = leaf
                    self.nodes[leaf.key] = leaf
                    new_leaves.append(leaf)
                    if last_internal is not None:
                        last_internal.link = active_node
                        last_internal = None
                else:
                    elen = edge_len_now(child, pos)
                    if active_length >= elen:
                        active_node = child
                        active_edge += elen
                        active_length -= elen
                        continue
                    if self._sym(child.seq, child.start + active_length) == c:
                        active_length += 1
                        if last_internal is not None and active_node is not self.root:
                            last_internal.link = active_node
                        break
                    split = self._new_node(child.seq, child.start, child.start + active_length, active_node)
                    self.nodes[split.key] = split
                    active_node.children[data[active_edge]] = split
                    leaf = self._new_node(sid, pos, None, split)
                    self.nodes[leaf.key] = leaf
                    new_leaves.append(leaf)
                    split.children[c] = leaf
                    child.start += active_length
                    child.parent = split
                    split.children[self._sym(child.seq, child.start)] = child
                    if last_internal is not None:
                        last_internal.link = split
                    last_internal = split
                remainder -= 1
                if active_node is self.root and active_length > 0:
                    active_length -= 1
                    active_edge = pos - remainder + 1
                elif active_node is not self.root:
                    active_node = active_node.link if active_node.link is not None else self.root

        for leaf in new_leaves:
            leaf.end = n

    def finalize(self) -> None:
        """Compute symbol depths, leaf labels and the suffix -> leaf map."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            for child in node.children.values():
                child.symbol_depth = node.symbol_depth + self.edge_length(child)
                stack.append(child)
        self.leaf_map.clear()
        for node in self.nodes.values():
            if node is self.root or node.children:
                continue
            if node.seq == _MARKER_SEQ:
                continue
            start = self._padded_len(node.seq) - node.symbol_depth + 1
            node.leaf_labels = [(node.seq, start)]
            self.leaf_map[(node.seq, start)] = node.key
        self._path_cache.clear()

    # -- queries over the structure ---------------------------------------

    def node(self, key: int) -> KstNode:
        return self.nodes[key]

    def leaf_count(self) -> int:
        return sum(1 for n in self.nodes.values() if n is not self.root and n.is_leaf())

    def spell(self, node: KstNode) -> str:
        """Concatenated edge labels from the root down to node."""
        parts = []
        cur = node
        while cur is not self.root:
            parts.append("".join(self.edge_symbol(cur, o) for o in range(self.edge_length(cur))))
            cur = cur.parent
        return "".join(reversed(parts))

    def avn(self, s: str) -> WalkTrace:
        """All Visited Nodes: trace of walking s exactly from the root."""
        return self.avnj(s, 0)

    def avnj(self, s: str, k: int) -> WalkTrace:
        """AVN with up to k mid-edge jumps over mismatching symbols.

        Reserved symbols (terminators, anchors) are never walkable: the walk
        stops with fell-off at the first one in s.
        """
        if k < 0:
            raise ParameterError("k must be >= 0")
        n = len(s)
        reserved = False
        for idx, ch in enumerate(s):
            if ch == ANCHOR_MARK or ord(ch) >= 0x100000:
                s, n, reserved = s[:idx], idx, True
                break
        trace = WalkTrace(entries=[(self.root.key, AT_NODE)])
        node = self.root
        i = 0
        while i < n:
            child = node.children.get(s[i])
            if child is None:
                trace.terminal = FELL_OFF
                return trace
            elen = self.edge_length(child)
            consumed = 0
            off = 0
            while off < elen and i < n:
                sym = self.edge_symbol(child, off)
                if sym == s[i]:
                    pass
                elif len(trace.jumps) < k and off > 0 and child.seq != _MARKER_SEQ and child.start + off < self.sequences[child.seq].length:
                    # mid-edge jump over one real (non-terminator) symbol
                    trace.jumps.append(i + 1)
                else:
                    if consumed:
                        trace.entries.append((consumed, AT_EDGE))
                    trace.matched_len += consumed
                    trace.terminal = FELL_OFF
                    trace.edge_sink = child.key
                    return trace
                consumed += 1
                off += 1
                i += 1
            trace.entries.append((consumed, AT_EDGE))
            trace.matched_len += consumed
            if off == elen:
                trace.entries.append((child.key, AT_NODE))
                node = child
            else:
                trace.edge_sink = child.key
                if reserved:
                    trace.terminal = FELL_OFF
                    return trace
                trace.entries.append((child.key, AT_NODE))
                trace.terminal = AT_EDGE
                return trace
        trace.terminal = FELL_OFF if reserved else AT_NODE
        return trace

    def avn_last(self, suffix_ref: tuple[int, int]) -> int:
        """Leaf key of an indexed suffix in O(1) via the precomputed map."""
        try:
            return self.leaf_map[suffix_ref]
        except KeyError:
            raise SuffixLookupError(f"suffix {suffix_ref!r} is not indexed") from None

    # -- canonical locations ----------------------------------------------

    def suffix_path(self, seq_id: int, start: int) -> tuple[list[int], list[int]]:
        """(depths, keys) of the nodes on the root->leaf path of a suffix."""
        ref = (seq_id, start)
        cached = self._path_cache.get(ref)
        if cached is not None:
            return cached
        leaf = self.nodes[self.avn_last(ref)]
        depths: list[int] = []
        keys: list[int] = []
        cur = leaf
        while cur is not None:
            depths.append(cur.symbol_depth)
            keys.append(cur.key)
            cur = cur.parent
        depths.reverse()
        keys.reverse()
        out = (depths, keys)
        self._path_cache[ref] = out
        return out

    def location_in_suffix(self, seq_id: int, start: int, length: int) -> tuple[int, bool]:
        """Walk endpoint of the first `length` symbols of a bare indexed suffix.

        Returns (node key, at_edge). Equivalent to walking the segment from
        the root but answered from the suffix's leaf path in O(log) time.
        """
        if length == 0:
            return (self.root.key, False)
        real = self.sequences[seq_id].length - start + 1
        if length > real:
            raise ParameterError("segment longer than the suffix")
        depths, keys = self.suffix_path(seq_id, start)
        # first path node at depth >= length (the leaf is deeper than any
        # bare-prefix length, so a match always exists)
        lo, hi = 0, len(depths) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if depths[mid] >= length:
                hi = mid
            else:
                lo = mid + 1
        return (keys[lo], depths[lo] != length)

    def tail_location(self, seq_id: int, start: int) -> tuple[int, bool]:
        """Endpoint of the whole bare tail starting at `start`, in O(1).

        `start == length + 1` denotes the empty tail (root). This is the
        constant-time form of the leaf-hash lookup: the leaf's parent depth
        decides whether the bare tail ends on the leaf edge or at the parent.
        """
        s = self.sequences[seq_id]
        if start == s.length + 1:
            return (self.root.key, False)
        real = s.length - start + 1
        leaf = self.nodes[self.avn_last((seq_id, start))]
        parent = leaf.parent
        if parent is not None and parent.symbol_depth == real:
            return (parent.key, False)
        return (leaf.key, True)

    # -- structure edits (pre-freeze only) ---------------------------------

    def _split_edge_at(self, child: KstNode, depth: int) -> KstNode:
        """Split child's incoming edge so a node sits at symbol depth `depth`."""
        parent = child.parent
        offset = depth - parent.symbol_depth
        node = self._new_node(child.seq, child.start, child.start + offset, parent)
        node.symbol_depth = depth
        self.nodes[node.key] = node
        parent.children[self.first_symbol(child)] = node
        child.start += offset
        child.parent = node
        node.children[self.first_symbol(child)] = child
        self._path_cache.clear()
        return node

    def node_at_depth_on_path(self, leaf_key: int, depth: int, create: bool = True) -> KstNode | None:
        """Node at exactly `depth` on the root->leaf path, splitting if needed."""
        chain: list[KstNode] = []
        cur = self.nodes[leaf_key]
        while cur is not None:
            chain.append(cur)
            if cur.symbol_depth <= depth:
                break
            cur = cur.parent
        below = chain[-2] if chain[-1].symbol_depth < depth else chain[-1]
        at = chain[-1]
        if at.symbol_depth == depth:
            return at
        if not create:
            return None
        return self._split_edge_at(below, depth)

    def ensure_leaf_at(self, suffix_ref: tuple[int, int], levels_up: int) -> int | None:
        """Guarantee a keyed leaf child at the point `levels_up` symbols above
        the end of the suffix's bare path; returns that leaf's key.

        Returns None (a no-op marker) when the suffix is shorter than
        levels_up. Idempotent: repeated calls locate the same leaf.
        """
        if self.frozen:
            raise ParameterError("tree is frozen")
        if levels_up < 1:
            raise ParameterError("levels_up must be >= 1")
        seq_id, start = suffix_ref
        real = self.sequences[seq_id].length - start + 1
        if levels_up > real:
            return None
        depth = real - levels_up
        leaf_key = self.avn_last(suffix_ref)
        target = self.node_at_depth_on_path(leaf_key, depth)
        leaf_children = [c for c in target.children.values() if c.is_leaf()]
        if leaf_children:
            return min(leaf_children, key=lambda c: self.first_symbol(c)).key
        anchor = self._new_node(_MARKER_SEQ, 0, 1, target)
        anchor.symbol_depth = target.symbol_depth + 1
        self.nodes[anchor.key] = anchor
        target.children[ANCHOR_MARK] = anchor
        return anchor.key

    def trim_to_depth(self, m: int) -> "KeyedSuffixTree":
        """Cut every path at symbol depth m, hoisting descendant labels.

        Existing nodes at depth m become leaves carrying all their former
        descendants' labels; a mid-edge cut creates a fresh keyed leaf. Only
        edge lengths are read while locating cut points.
        """
        if m <= 0:
            raise ParameterError("m must be >= 1")
        if self.frozen:
            raise ParameterError("tree is frozen")

        def collect_labels(node: KstNode) -> list[tuple[int, int]]:
            out: list[tuple[int, int]] = []
            stack = [node]
            while stack:
                cur = stack.pop()
                if cur.is_leaf():
                    out.extend(cur.leaf_labels)
                else:
                    stack.extend(cur.children.values())
            return sorted(out)

        def drop_subtree(node: KstNode) -> None:
            stack = list(node.children.values())
            node.children = {}
            while stack:
                cur = stack.pop()
                stack.extend(cur.children.values())
                del self.nodes[cur.key]

        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.symbol_depth == m:
                if node.children:
                    node.leaf_labels = collect_labels(node)
                    drop_subtree(node)
                continue
            for child in list(node.children.values()):
                cdepth = node.symbol_depth + self.edge_length(child)
                if cdepth <= m:
                    stack.append(child)
                else:
                    labels = collect_labels(child)
                    cut = self._split_edge_at(child, m)
                    cut.leaf_labels = labels
                    drop_subtree(cut)
        self.leaf_map = {}
        for node in self.nodes.values():
            if node is not self.root and node.is_leaf():
                for label in node.leaf_labels:
                    self.leaf_map[label] = node.key
        self._path_cache.clear()
        return self

    def freeze(self) -> None:
        self.frozen = True


def build_gst(sequences: list[Sequence]) -> KeyedSuffixTree:
    """Build the keyed generalized suffix tree over all sequences.

    Sequence ids must equal their list positions (the tree resolves edge
    labels through the arena by id).
    """
    if not sequences:
        raise ParameterError("need at least one sequence")
    for pos, seq in enumerate(sequences):
        if seq.id != pos:
            raise ParameterError(f"sequence at position {pos} has id {seq.id}")
    tree = KeyedSuffixTree(sequences)
    for seq in sequences:
        tree.add_sequence(seq)
    tree.finalize()
    return tree
