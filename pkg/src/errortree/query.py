"""Query evaluation: k-Hamming, k-edit and k-wildcard over a built error tree.

The search walks the pattern through the error-tree skeleton keeping a small
state (location, pattern cursor, remaining budget). Mid-edge mismatches are
absorbed as jumps; at the single heavy child of each node the first edge
symbol may be jumped too (heavy subtrees are excluded from the tables). At
every internal node the remaining-error combinations are probed against the
node's tables, assembling error keys from the pattern's suffix walk traces.

Every candidate leaf is re-verified with the exact distance primitives
before being reported, so the result set never contains a false positive
regardless of how generously the index probes.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field

from .alphabet import Pattern, TRIE_END
from .distances import (edit_distance_at_most, hamming_distance,
                        wildcard_extra_mismatches, window_edit_distance)
from .error_tree import (BUCKET, DICTIONARY, FLAVOR_GAP, FLAVOR_SUB, TEXT,
                         ErrorTree, EtNode, encode_part)
from .errors import CapabilityError, ModeError, ParameterError
from .oracle import EDIT, HAMMING, WILDCARD, MatchResult
from .suffix_tree import AT_EDGE, AT_NODE, WalkTrace

__all__ = [
    "MatchResult", "PatternWalkSet", "prepare_pattern",
    "query_hamming", "query_edit", "query_wildcard",
    "query_text_hamming", "query_text_edit", "query_text_wildcard",
]


@dataclass
class _TraceView:
    """Bisectable view of one suffix trace for segment-location lookups."""

    depths: list[int]
    keys: list[int]
    exact_len: int
    edge_sink: int | None


@dataclass
class PatternWalkSet:
    """The m suffix walk traces of a pattern (the query-time key source)."""

    pattern: str
    k: int
    traces: list[WalkTrace]
    root_key: int
    views: list[_TraceView] = field(default_factory=list)

    def __post_init__(self) -> None:
        for trace in self.traces:
            entries = trace.entries
            if trace.terminal == AT_EDGE:
                entries = entries[:-1]  # trailing sink; its true depth is deeper
            depths: list[int] = []
            keys: list[int] = []
            cum = 0
            for value, tag in entries:
                if tag == AT_NODE:
                    depths.append(cum)
                    keys.append(value)
                else:
                    cum += value
            exact = trace.jumps[0] - 1 if trace.jumps else trace.matched_len
            self.views.append(_TraceView(depths, keys, exact, trace.edge_sink))

    @property
    def m(self) -> int:
        return len(self.pattern)

    def locate(self, start: int, length: int) -> tuple[int, bool] | None:
        """Walk endpoint of pattern[start .. start+length-1], or None when the
        segment does not occur in the tree (then no stored key can match)."""
        if length == 0:
            return (self.root_key, False)
        if start < 1 or start > self.m or start + length - 1 > self.m:
            return None
        view = self.views[start - 1]
        if length > view.exact_len:
            return None
        i = bisect_left(view.depths, length)
        if i < len(view.depths):
            return (view.keys[i], view.depths[i] != length)
        if view.edge_sink is not None:
            return (view.edge_sink, True)
        return None


def prepare_pattern(index: ErrorTree, pattern: str, k: int) -> PatternWalkSet:
    """Compute the AVNJ trace of every pattern suffix against the index."""
    if len(pattern) < 1:
        raise ParameterError("pattern length must be >= 1")
    if k < 0:
        raise ParameterError("k must be >= 0")
    if index.mode == TEXT and len(pattern) != index.m:
        raise ModeError(f"text index supports pattern length {index.m}, got {len(pattern)}")
    traces = [index.kst.avnj(pattern[i:], k) for i in range(len(pattern))]
    return PatternWalkSet(pattern, k, traces, index.kst.root.key)


# -- the search engine -----------------------------------------------------


def _probe(tables: dict, pws: PatternWalkSet, q: int, budget: int,
           edit: bool, wild: frozenset[int] | None, extra: int,
           text_edit: bool, out: set[int]) -> None:
    """Probe one node's tables with every assemblable error-key combination.

    q is the pattern cursor on arrival; the first hypothesized operation sits
    immediately after the node on the stored side. Depth-first over operation
    positions with early exit on unwalkable pattern segments. In text-edit
    mode a bucket reached at a split point is also a candidate set: the
    pattern may keep matching the text beyond the trie depth, which the
    per-position verification prices.
    """
    m = pws.m
    locate = pws.locate

    def rec(tab: dict, flavor: int, ps: int, used: int, extra_left: int) -> None:
        loc = locate(ps, m - ps + 1)
        if loc is not None:
            sub = tab.get(encode_part(loc, flavor))
            if sub is not None:
                bucket = sub.get(BUCKET)
                if bucket is not None:
                    out.update(bucket)
        if used >= budget and not text_edit:
            return
        for seg in range(0, m - ps + 2):
            loc = locate(ps, seg)
            if loc is None:
                break
            sub = tab.get(encode_part(loc, flavor))
            if sub is None:
                continue
            if text_edit:
                bucket = sub.get(BUCKET)
                if bucket is not None:
                    out.update(bucket)
            if used >= budget:
                continue
            opos = ps + seg  # pattern position a consuming operation would use
            if opos <= m:
                if wild is None:
                    rec(sub, FLAVOR_SUB, opos + 1, used + 1, extra_left)
                elif opos in wild:
                    rec(sub, FLAVOR_SUB, opos + 1, used + 1, extra_left)
                elif extra_left > 0:
                    rec(sub, FLAVOR_SUB, opos + 1, used + 1, extra_left - 1)
            if edit:
                rec(sub, FLAVOR_SUB, opos, used + 1, extra_left)      # deletion
                if opos <= m:
                    rec(sub, FLAVOR_GAP, opos + 1, used + 1, extra_left)  # insertion

    if budget < 1:
        return
    if q <= m:
        if wild is None:
            rec(tables, FLAVOR_SUB, q + 1, 1, extra)
        elif q in wild:
            rec(tables, FLAVOR_SUB, q + 1, 1, extra)
        elif extra > 0:
            rec(tables, FLAVOR_SUB, q + 1, 1, extra - 1)
    if edit:
        rec(tables, FLAVOR_SUB, q, 1, extra)
        if q <= m:
            rec(tables, FLAVOR_GAP, q + 1, 1, extra)


def _collect_string_ends(node: EtNode, slack: int, out: set[int]) -> None:
    """Marker leaves (string/text ends) within `slack` real symbols below node."""
    base = node.depth
    stack = [node]
    while stack:
        cur = stack.pop()
        if cur.is_leaf():
            if cur.has_marker and cur.depth - base <= slack:
                out.add(cur.key)
        elif cur.depth - base <= slack:
            stack.extend(cur.children.values())


def _collect_all_leaves(node: EtNode, out: set[int]) -> None:
    stack = [node]
    while stack:
        cur = stack.pop()
        if cur.is_leaf():
            out.add(cur.key)
        else:
            stack.extend(cur.children.values())


def _search(et: ErrorTree, pattern: str, budget: int, edit: bool,
            wild: frozenset[int] | None, extra_budget: int,
            pws: PatternWalkSet, query_k: int) -> set[int]:
    """Collect candidate leaf keys for a pattern under the given budget."""
    sk = et.skeleton
    m = len(pattern)
    text_mode = et.mode == TEXT
    out: set[int] = set()
    seen: set[tuple] = set()
    stack: list[tuple] = [(sk.root, 0, 1, budget, extra_budget, False)]
    while stack:
        node, off, q, b, extra, gate = stack.pop()
        state = (node.key, off, q, b, extra, gate)
        if state in seen:
            continue
        seen.add(state)

        if off < node.length:
            sym = sk.edge_symbol(node, off)
            if sym == TRIE_END:
                r = m - q + 1
                if r == 0 or (edit and r <= b):
                    out.add(node.key)
                continue
            if edit and text_mode and q > m:
                # the window may end mid-edge; deeper symbols belong to
                # longer windows, which verification prices per position
                _collect_all_leaves(node, out)
                continue
            if q <= m and pattern[q - 1] == sym:
                stack.append((node, off + 1, q + 1, b, extra, False))
                continue
            if b > 0:
                if q <= m:
                    if wild is None:
                        stack.append((node, off + 1, q + 1, b - 1, extra, False))
                    elif q in wild:
                        stack.append((node, off + 1, q + 1, b - 1, extra, False))
                    elif extra > 0:
                        stack.append((node, off + 1, q + 1, b - 1, extra - 1, False))
                    if edit:
                        stack.append((node, off, q + 1, b - 1, extra, False))
                if edit:
                    stack.append((node, off + 1, q, b - 1, extra, False))
            continue

        # at a node
        r = m - q + 1
        if node.is_leaf():
            # text-mode cut leaf: the window may continue past the trie depth
            if r == 0 or (edit and text_mode and r <= b + query_k):
                out.add(node.key)
            continue
        if r == 0:
            _collect_string_ends(node, b if edit else 0, out)
            if edit and text_mode:
                _collect_all_leaves(node, out)
        elif edit and r <= b:
            _collect_string_ends(node, b - r, out)
        if b > 0 and not gate and node.tables:
            _probe(node.tables, pws, q, b, edit, wild, extra, edit and text_mode, out)
        if q <= m:
            child = node.children.get(pattern[q - 1])
            if child is not None and (not gate or child is node.children.get(node.heavy)):
                stack.append((child, 1, q + 1, b, extra, False))
        if b > 0 and node.heavy is not None:
            heavy = node.children[node.heavy]
            hsym = sk.first_symbol(heavy)
            if hsym != TRIE_END:
                if q <= m and hsym != pattern[q - 1]:
                    if wild is None:
                        stack.append((heavy, 1, q + 1, b - 1, extra, False))
                    elif q in wild:
                        stack.append((heavy, 1, q + 1, b - 1, extra, False))
                    elif extra > 0:
                        stack.append((heavy, 1, q + 1, b - 1, extra - 1, False))
                if edit and (q > m or hsym != pattern[q - 1]):
                    stack.append((heavy, 1, q, b - 1, extra, False))
        if edit and b > 0 and q <= m:
            stack.append((node, off, q + 1, b - 1, extra, True))
    return out


# -- verification ----------------------------------------------------------


def _verify_dict(et: ErrorTree, leaves: set[int], pattern: str, k: int,
                 kind: str, extra_budget: int, wc: str) -> set[MatchResult]:
    out: set[MatchResult] = set()
    for leaf_key in leaves:
        leaf = et.skeleton.nodes[leaf_key]
        if not leaf.labels:
            continue
        data = et.sequences[min(leaf.labels)].data
        if kind == HAMMING:
            d = hamming_distance(pattern, data)
            ok = d is not None and d <= k
        elif kind == EDIT:
            d = edit_distance_at_most(pattern, data, k)
            ok = d is not None
        else:
            d = wildcard_extra_mismatches(pattern, data, wc)
            ok = d is not None and d <= extra_budget
        if ok:
            for sid in leaf.labels:
                out.add(MatchResult(sid, d, kind))
    return out


def _verify_text(et: ErrorTree, leaves: set[int], pattern: str, k: int,
                 kind: str, extra_budget: int, wc: str) -> set[MatchResult]:
    out: set[MatchResult] = set()
    text = et.text
    n = len(text)
    m = len(pattern)
    for leaf_key in leaves:
        leaf = et.skeleton.nodes[leaf_key]
        if kind == EDIT:
            for p in leaf.labels:
                d = window_edit_distance(text, p, pattern, k)
                if d is not None:
                    out.add(MatchResult(p, d, kind))
            continue
        # all positions at one leaf share the same length-m window
        starts = [p for p in leaf.labels if n - p + 1 >= m]
        if not starts:
            continue
        window = text[starts[0] - 1 : starts[0] - 1 + m]
        if kind == HAMMING:
            d = hamming_distance(pattern, window)
            ok = d is not None and d <= k
        else:
            d = wildcard_extra_mismatches(pattern, window, wc)
            ok = d is not None and d <= extra_budget
        if ok:
            for p in starts:
                out.add(MatchResult(p, d, kind))
    return out


# -- public query operations ------------------------------------------------


def _check_budget(index: ErrorTree, k: int) -> None:
    if k < 0:
        raise ParameterError("k must be >= 0")
    if k > index.k:
        raise CapabilityError(f"index built for k <= {index.k}, queried with k={k}")


def _as_text(pattern: str | Pattern) -> str:
    return pattern.data if isinstance(pattern, Pattern) else pattern


def _wildcard_pattern(index: ErrorTree, pattern: str | Pattern,
                      wildcard: str | None) -> tuple[str, str]:
    """Resolve the per-query wildcard character and validate the pattern."""
    if isinstance(pattern, Pattern) and wildcard is None:
        wildcard = pattern.wildcard
    text = _as_text(pattern)
    wc = wildcard if wildcard is not None else index.alphabet.wildcard
    if len(wc) != 1 or wc in index.alphabet.symbols:
        raise ParameterError("wildcard must be a single symbol outside the alphabet")
    allowed = set(index.alphabet.symbols)
    for off, ch in enumerate(text):
        if ch != wc and ch not in allowed:
            raise ParameterError(f"pattern symbol {ch!r} at offset {off + 1} is neither "
                                 f"in the alphabet nor the wildcard {wc!r}")
    return text, wc


def _run(index: ErrorTree, pattern: str, budget: int, edit: bool,
         wild: frozenset[int] | None, extra_budget: int, kind: str,
         verify_k: int, wildcard: str | None = None) -> set[MatchResult]:
    pws = prepare_pattern(index, pattern, budget)
    leaves = _search(index, pattern, budget, edit, wild, extra_budget, pws, verify_k)
    wc = wildcard if wildcard is not None else index.alphabet.wildcard
    if index.mode == DICTIONARY:
        return _verify_dict(index, leaves, pattern, verify_k, kind, extra_budget, wc)
    return _verify_text(index, leaves, pattern, verify_k, kind, extra_budget, wc)


def query_hamming(index: ErrorTree, pattern: str | Pattern, k: int) -> set[MatchResult]:
    """Dictionary strings within Hamming distance k of the pattern."""
    if index.mode != DICTIONARY:
        raise ModeError("query_hamming needs a dictionary index; use query_text_hamming")
    _check_budget(index, k)
    pattern = _as_text(pattern)
    index.alphabet.validate(pattern, what="pattern")
    return _run(index, pattern, k, False, None, 0, HAMMING, k)


def query_edit(index: ErrorTree, pattern: str | Pattern, k: int) -> set[MatchResult]:
    """Dictionary strings within edit distance k of the pattern."""
    if index.mode != DICTIONARY:
        raise ModeError("query_edit needs a dictionary index; use query_text_edit")
    _check_budget(index, k)
    if k > 0 and not index.indels_built:
        raise CapabilityError("index was built without indel tables")
    pattern = _as_text(pattern)
    index.alphabet.validate(pattern, what="pattern")
    return _run(index, pattern, k, k > 0, None, 0, EDIT, k)


def query_wildcard(index: ErrorTree, pattern: str | Pattern, k: int,
                   all_errors: bool = False, wildcard: str | None = None) -> set[MatchResult]:
    """Dictionary strings agreeing with the pattern outside its wildcards.

    Wildcard positions are forced error positions; with all_errors the
    remaining budget k - w may absorb additional substitutions. The wildcard
    character defaults to the alphabet's but is configurable per query.
    """
    if index.mode != DICTIONARY:
        raise ModeError("query_wildcard needs a dictionary index")
    _check_budget(index, k)
    pattern, wc = _wildcard_pattern(index, pattern, wildcard)
    wild = frozenset(i + 1 for i, ch in enumerate(pattern) if ch == wc)
    if len(wild) > k:
        raise ParameterError(f"{len(wild)} wildcards exceed k={k}")
    extra = (k - len(wild)) if all_errors else 0
    return _run(index, pattern, len(wild) + extra, False, wild, extra, WILDCARD, k,
                wildcard=wc)


def _check_text(index: ErrorTree, pattern: str) -> None:
    if index.mode != TEXT:
        raise ModeError("text query needs a text-mode index")
    if len(pattern) != index.m:
        raise ModeError(f"text index supports pattern length {index.m}, got {len(pattern)}")


def query_text_hamming(index: ErrorTree, pattern: str | Pattern, k: int) -> set[MatchResult]:
    """1-based text positions whose length-m window is within Hamming k."""
    pattern = _as_text(pattern)
    _check_text(index, pattern)
    _check_budget(index, k)
    index.alphabet.validate(pattern, what="pattern")
    return _run(index, pattern, k, False, None, 0, HAMMING, k)


def query_text_edit(index: ErrorTree, pattern: str | Pattern, k: int) -> set[MatchResult]:
    """1-based text positions with some window in [m-k, m+k] within edit k."""
    pattern = _as_text(pattern)
    _check_text(index, pattern)
    _check_budget(index, k)
    if k > 0 and not index.indels_built:
        raise CapabilityError("index was built without indel tables")
    index.alphabet.validate(pattern, what="pattern")
    return _run(index, pattern, k, k > 0, None, 0, EDIT, k)


def query_text_wildcard(index: ErrorTree, pattern: str | Pattern, k: int,
                        all_errors: bool = False, wildcard: str | None = None) -> set[MatchResult]:
    """1-based text positions whose window matches outside the wildcards."""
    pattern = _as_text(pattern)
    _check_text(index, pattern)
    _check_budget(index, k)
    pattern, wc = _wildcard_pattern(index, pattern, wildcard)
    wild = frozenset(i + 1 for i, ch in enumerate(pattern) if ch == wc)
    if len(wild) > k:
        raise ParameterError(f"{len(wild)} wildcards exceed k={k}")
    extra = (k - len(wild)) if all_errors else 0
    return _run(index, pattern, len(wild) + extra, False, wild, extra, WILDCARD, k,
                wildcard=wc)
