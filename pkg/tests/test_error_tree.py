import random

import pytest

from errortree import (ASCII, DNA, build_dictionary_index, build_text_index,
                       stats)
from errortree.alphabet import make_sequences
from errortree.error_tree import (FLAVOR_SUB, ErrorTree, anchor_shifted_tails,
                                  build_compact_trie, build_indel_tables,
                                  build_level_1, build_level_k, decode_part)
from errortree.errors import ParameterError
from errortree.suffix_tree import build_gst
from errortree.workloads import random_dictionary


def fresh(strings, alphabet=ASCII, k=1):
    seqs = make_sequences(strings, alphabet)
    return ErrorTree("dictionary", alphabet, seqs, build_gst(seqs),
                     build_compact_trie(seqs), k, None)


def tuples(et):
    return sorted(et.iter_tuples())


def test_trie_two_strings():
    sk = build_compact_trie(make_sequences(["aa", "ab"], ASCII))
    # root, shared 'a' node, two leaves
    assert len(sk.nodes) == 4
    mid = sk.root.children["a"]
    assert set(mid.children) == {"a", "b"}
    assert all(c.is_leaf() for c in mid.children.values())


def test_trie_singleton():
    sk = build_compact_trie(make_sequences(["abc"], ASCII))
    assert len(sk.nodes) == 2
    leaf = sk.root.children["a"]
    assert leaf.is_leaf() and leaf.labels == [0] and leaf.depth == 3


def test_trie_duplicates_collapse():
    sk = build_compact_trie(make_sequences(["ab", "ab"], ASCII))
    leaves = sk.leaves()
    assert len(leaves) == 1
    assert leaves[0].labels == [0, 1]


def test_trie_rejects_empty():
    with pytest.raises(ParameterError):
        build_compact_trie([])


def test_level1_heavy_tie():
    # {"aa","ab"}: ties break to the smallest symbol, so 'a' is heavy and
    # only the "ab" side contributes; its tail after position 2 is empty.
    et = build_level_1(fresh(["aa", "ab"]))
    all_tuples = tuples(et)
    assert len(all_tuples) == 1
    owner, kind, level, parts, bucket = all_tuples[0]
    assert kind == "sub" and level == 1
    key, at_edge, flavor = decode_part(parts[0])
    assert key == et.kst.root.key and not at_edge and flavor == FLAVOR_SUB
    leaf_ab = [l for l in et.skeleton.leaves() if l.labels == [1]][0]
    assert bucket == [leaf_ab.key]


def test_level1_single_string_empty():
    et = build_level_1(fresh(["abc"]))
    assert tuples(et) == []


def test_level1_root_branch():
    # {"ax","bx"}: root's non-heavy branch is "bx"; its entry is keyed by the
    # walk endpoint of "x" in the suffix tree.
    et = build_level_1(fresh(["ax", "bx"]))
    all_tuples = tuples(et)
    assert len(all_tuples) == 1
    _, _, _, parts, bucket = all_tuples[0]
    key, at_edge, _ = decode_part(parts[0])
    walk = et.kst.avn("x")
    assert key == walk.last_node_key()
    leaf_bx = [l for l in et.skeleton.leaves() if l.labels == [1]][0]
    assert bucket == [leaf_bx.key]


def test_level_k_degenerates_to_level_1():
    a = build_level_1(fresh(["aa", "ab"]))
    b = build_level_k(fresh(["aa", "ab"]), 1)
    assert tuples(a) == tuples(b)


def test_level2_hand_trace():
    # {"aab","abb","bbb"}: heavy at the root is the 'a' subtree, so only
    # "bbb" contributes there; at the depth-1 node only "abb" contributes.
    et = fresh(["aab", "abb", "bbb"], k=2)
    build_level_1(et)
    build_level_k(et, 2)
    by_level = {}
    for _, kind, level, parts, bucket in tuples(et):
        by_level.setdefault((kind, level), []).append((parts, bucket))
    assert len(by_level[("sub", 1)]) == 2
    assert len(by_level[("sub", 2)]) == 3
    # the root's level-2 tuples pair a segment key with a tail key for "bbb"
    leaf_bbb = [l for l in et.skeleton.leaves() if l.labels == [2]][0]
    root_tuples = [t for t in tuples(et) if t[0] == et.skeleton.root.key and t[2] == 2]
    assert all(bucket == [leaf_bbb.key] for _, _, _, _, bucket in root_tuples)
    assert len(root_tuples) == 2


def test_level_order_enforced():
    et = fresh(["aab", "abb"], k=3)
    build_level_1(et)
    with pytest.raises(ParameterError):
        build_level_k(et, 3)


def test_heavy_only_node_has_no_tuples():
    # single string: every node's single child is heavy, tables stay empty
    et = build_level_1(fresh(["abcabc"]))
    assert tuples(et) == []


def test_heavy_exclusion_invariant():
    rng = random.Random(10)
    strings = random_dictionary(rng, 25, 3, 8, DNA)
    idx = build_dictionary_index(strings, 2, DNA, indels=True)
    sk = idx.skeleton
    for owner, _kind, _level, _parts, bucket in idx.iter_tuples():
        node = sk.nodes[owner]
        heavy = node.children[node.heavy]
        for leaf_key in bucket:
            # climb from the leaf; the step below `node` must not be heavy
            cur = sk.nodes[leaf_key]
            while cur.parent is not node:
                cur = cur.parent
            assert cur is not heavy


def test_indel_tables_idempotent():
    et = fresh(["abc", "ac"], k=1)
    anchor_shifted_tails(et, 1)
    build_level_1(et)
    build_indel_tables(et, 1)
    first = tuples(et)
    build_indel_tables(et, 1)
    assert tuples(et) == first


def test_k0_builds_nothing():
    idx = build_dictionary_index(["abc", "abd"], 0, ASCII)
    assert list(idx.iter_tuples()) == []


def test_stats_examples():
    idx = build_dictionary_index(["aa", "ab"], 1, ASCII)
    st = stats(idx)
    assert st.total_entries == 1
    assert st.entries[("sub", 1)] == 1
    empty = build_dictionary_index(["abc"], 1, ASCII)
    assert stats(empty).total_entries == 0


def test_stats_monotone_in_k():
    rng = random.Random(11)
    strings = random_dictionary(rng, 30, 4, 10, DNA)
    totals = [stats(build_dictionary_index(strings, k, DNA)).total_entries for k in (1, 2, 3)]
    assert totals[0] <= totals[1] <= totals[2]


def test_text_skeleton_labels():
    idx = build_text_index("aaaa", 2, 1, ASCII)
    leaves = idx.skeleton.leaves()
    labels = sorted(lab for l in leaves for lab in l.labels)
    assert labels == [1, 2, 3, 4]
    cut = [l for l in leaves if not l.has_marker]
    assert any(sorted(l.labels) == [1, 2, 3] for l in cut)


def test_text_mode_still_correct_after_label_filter():
    import errortree as et
    idx = build_text_index("aaaa", 2, 1, ASCII, indels=True)
    got = {(r.subject, r.distance) for r in et.query_text_hamming(idx, "ab", 1)}
    want = {(r.subject, r.distance) for r in et.scan_text_hamming("aaaa", "ab", 1)}
    assert got == want == {(1, 1), (2, 1), (3, 1)}
