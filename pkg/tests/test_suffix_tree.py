import random

import pytest

from errortree import Sequence, build_gst
from errortree.errors import ParameterError, SuffixLookupError
from errortree.suffix_tree import AT_EDGE, AT_NODE, FELL_OFF
from errortree.workloads import plant_substitutions, random_string
from errortree import DNA


def tree_over(strings):
    return build_gst([Sequence(i, s) for i, s in enumerate(strings)])


def all_leaves(tree):
    return [n for n in tree.nodes.values() if n is not tree.root and n.is_leaf()]


def test_build_single_symbol():
    tree = tree_over(["a"])
    # suffixes of "a$": "a$" and "$"
    assert tree.leaf_count() == 2


def test_build_three_suffixes():
    tree = tree_over(["abc"])
    non_term = [n for n in all_leaves(tree) if n.leaf_labels and n.leaf_labels[0][1] <= 3]
    assert len(non_term) == 3


def test_duplicate_strings_share_paths():
    tree = tree_over(["ab", "ab"])
    labels = {lab for n in all_leaves(tree) for lab in n.leaf_labels}
    assert {(0, 1), (0, 2), (1, 1), (1, 2)} <= labels
    # both full-string suffixes spell "ab" + their terminator
    for sid in (0, 1):
        leaf = tree.nodes[tree.avn_last((sid, 1))]
        assert tree.spell(leaf)[:2] == "ab"


def test_leaf_count_invariant():
    rng = random.Random(0)
    for _ in range(10):
        strings = [random_string(rng, rng.randint(1, 12), DNA) for _ in range(rng.randint(1, 15))]
        tree = tree_over(strings)
        non_term = sum(
            1 for n in all_leaves(tree) for (sid, start) in n.leaf_labels
            if start <= len(strings[sid])
        )
        assert non_term == sum(len(s) for s in strings)


def test_spelling_invariant():
    rng = random.Random(1)
    strings = [random_string(rng, rng.randint(2, 16), DNA) for _ in range(30)]
    tree = tree_over(strings)
    leaves = all_leaves(tree)
    for leaf in rng.sample(leaves, min(100, len(leaves))):
        (sid, start) = leaf.leaf_labels[0]
        seq = tree.sequences[sid]
        expected = seq.data[start - 1:] + seq.terminator
        assert tree.spell(leaf) == expected


def test_avn_empty_and_missing():
    tree = tree_over(["aa", "ab"])
    t = tree.avn("")
    assert t.entries == [(tree.root.key, AT_NODE)]
    assert t.matched_len == 0 and t.terminal == AT_NODE
    t = tree.avn("x")
    assert t.entries == [(tree.root.key, AT_NODE)]
    assert t.terminal == FELL_OFF


def test_avn_walk_shape():
    tree = tree_over(["aa", "ab"])
    t = tree.avn("ab")
    tags = [tag for _, tag in t.entries]
    assert tags == [AT_NODE, AT_EDGE, AT_NODE, AT_EDGE, AT_NODE]
    assert t.matched_len == 2 and t.terminal == AT_EDGE
    # the mid-path node spells "a", the trailing sink is the "ab" leaf
    mid = tree.nodes[t.entries[2][0]]
    assert tree.spell(mid) == "a"
    sink = tree.nodes[t.entries[4][0]]
    assert tree.spell(sink).startswith("ab")


def test_avn_last_by_hand():
    tree = tree_over(["ab"])
    leaf_b = tree.nodes[tree.avn_last((0, 2))]
    assert tree.spell(leaf_b)[0] == "b"
    leaf_ab = tree.nodes[tree.avn_last((0, 1))]
    assert tree.spell(leaf_ab)[:2] == "ab"
    with pytest.raises(SuffixLookupError):
        tree.avn_last((5, 1))


def test_avnj_zero_equals_avn():
    tree = tree_over(["abcd"])
    for s in ("abcd", "abxd", "", "xyz"):
        a, b = tree.avn(s), tree.avnj(s, 0)
        assert (a.entries, a.jumps, a.matched_len, a.terminal) == (b.entries, b.jumps, b.matched_len, b.terminal)


def test_avnj_mid_edge_jump():
    tree = tree_over(["abcd"])
    t = tree.avnj("abxd", 1)
    assert t.jumps == [3]
    assert t.matched_len == 4
    # walk stayed on the "abcd$" leaf edge
    assert tree.spell(tree.nodes[t.last_node_key()]).startswith("abcd")


def test_avnj_no_jump_at_node():
    tree = tree_over(["abcd"])
    t = tree.avnj("xbcd", 1)
    assert t.terminal == FELL_OFF and t.jumps == []
    assert t.matched_len == 0


def test_avn_reserved_symbols_fall_off():
    tree = tree_over(["ab"])
    term = tree.sequences[0].terminator
    t = tree.avn("ab" + term)
    assert t.terminal == FELL_OFF
    assert t.matched_len == 2
    t = tree.avn(term)
    assert t.terminal == FELL_OFF and t.matched_len == 0


def test_avnj_jump_positions_increasing():
    rng = random.Random(3)
    strings = [random_string(rng, 10, DNA) for _ in range(8)]
    tree = tree_over(strings)
    for _ in range(50):
        s = plant_substitutions(rng, rng.choice(strings), rng.randint(0, 3), DNA)
        t = tree.avnj(s, 3)
        assert t.jumps == sorted(set(t.jumps))
        assert len(t.jumps) <= 3


def test_trace_equality_single_substitution():
    rng = random.Random(4)
    checked = 0
    for _ in range(200):
        strings = [random_string(rng, rng.randint(3, 12), DNA) for _ in range(rng.randint(1, 10))]
        tree = tree_over(strings)
        sid = rng.randrange(len(strings))
        s1 = strings[sid]
        x = rng.randint(1, len(s1) - 1) if len(s1) > 1 else 1
        if x >= len(s1):
            continue
        s2 = list(s1)
        s2[x - 1] = rng.choice([c for c in DNA.symbols if c != s2[x - 1]])
        s2 = "".join(s2)
        # the suffixes after the mismatch are identical, so the traces agree
        t1, t2 = tree.avn(s1[x:]), tree.avn(s2[x:])
        assert t1.entries == t2.entries and t1.terminal == t2.terminal
        # last-node form: mid-edge endpoints sink at the suffix's own leaf
        if t2.terminal == AT_EDGE:
            assert t2.last_node_key() == tree.avn_last((sid, x + 1))
        checked += 1
    assert checked > 100


def test_trace_equality_between_errors():
    rng = random.Random(5)
    for _ in range(100):
        strings = [random_string(rng, rng.randint(4, 14), DNA) for _ in range(rng.randint(1, 8))]
        tree = tree_over(strings)
        s1 = rng.choice(strings)
        k = rng.randint(1, min(3, len(s1)))
        positions = sorted(rng.sample(range(1, len(s1) + 1), k))
        s2 = list(s1)
        for p in positions:
            s2[p - 1] = rng.choice([c for c in DNA.symbols if c != s2[p - 1]])
        s2 = "".join(s2)
        bounds = [0] + positions + [len(s1) + 1]
        for a, b in zip(positions, positions[1:] + [len(s1) + 1]):
            seg1, seg2 = s1[a : b - 1], s2[a : b - 1]
            assert seg1 == seg2
            t1, t2 = tree.avn(seg1), tree.avn(seg2)
            assert t1.entries == t2.entries


def test_trim_repeats():
    tree = tree_over(["aaaa"]).trim_to_depth(2)
    cut = [n for n in all_leaves(tree) if n.symbol_depth == 2 and len(n.leaf_labels) > 1]
    assert len(cut) == 1
    assert cut[0].leaf_labels == [(0, 1), (0, 2), (0, 3)]


def test_trim_depth_one():
    tree = tree_over(["aaaa"]).trim_to_depth(1)
    a_child = tree.root.children["a"]
    assert a_child.is_leaf()
    assert a_child.leaf_labels == [(0, 1), (0, 2), (0, 3), (0, 4)]


def test_trim_noop_when_deep():
    tree = tree_over(["abc"])
    labels_before = {lab for n in all_leaves(tree) for lab in n.leaf_labels}
    tree.trim_to_depth(50)
    labels_after = {lab for n in all_leaves(tree) for lab in n.leaf_labels}
    assert labels_before == labels_after


def test_trim_preserves_labels():
    rng = random.Random(6)
    for _ in range(25):
        text = random_string(rng, rng.randint(5, 120), DNA)
        m = rng.randint(1, 10)
        tree = tree_over([text])
        before = {lab for n in all_leaves(tree) for lab in n.leaf_labels}
        tree.trim_to_depth(m)
        after = {lab for n in all_leaves(tree) for lab in n.leaf_labels}
        assert before == after


def test_trim_rejects_bad_depth():
    with pytest.raises(ParameterError):
        tree_over(["abc"]).trim_to_depth(0)


def test_ensure_leaf_idempotent():
    tree = tree_over(["abc"])
    key1 = tree.ensure_leaf_at((0, 1), 1)
    count = len(tree.nodes)
    key2 = tree.ensure_leaf_at((0, 1), 1)
    assert key1 == key2
    assert len(tree.nodes) == count


def test_ensure_leaf_splits_edge():
    tree = tree_over(["abc"])
    before = len(tree.nodes)
    tree.ensure_leaf_at((0, 1), 1)
    # a node now sits at depth 2 on the "abc" path
    t = tree.avn("ab")
    assert t.terminal == AT_NODE
    assert len(tree.nodes) > before


def test_ensure_leaf_at_root():
    tree = tree_over(["abc"])
    key = tree.ensure_leaf_at((0, 3), 1)  # suffix "c", one level up = root
    assert key is not None
    node = tree.nodes[key]
    assert node.parent is tree.root
    assert tree.ensure_leaf_at((0, 3), 2) is None  # shorter than levels_up


def test_naive_cross_check():
    # every suffix of every string must spell out exactly at its leaf
    rng = random.Random(7)
    for _ in range(15):
        strings = [random_string(rng, rng.randint(1, 9), DNA) for _ in range(rng.randint(1, 9))]
        tree = tree_over(strings)
        expected = set()
        for sid, s in enumerate(strings):
            for start in range(1, len(s) + 2):
                expected.add((sid, start))
        got = set(tree.leaf_map)
        assert got == expected
        for (sid, start), key in tree.leaf_map.items():
            seq = tree.sequences[sid]
            assert tree.spell(tree.nodes[key]) == seq.data[start - 1:] + seq.terminator
