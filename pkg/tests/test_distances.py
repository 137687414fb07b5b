import pytest
from hypothesis import given, strategies as st

from errortree import (edit_distance, edit_distance_at_most, hamming_distance,
                       wildcard_mismatch, window_edit_distance)
from errortree.errors import ParameterError

dna = st.text(alphabet="ACGT", min_size=0, max_size=12)


def test_hamming_examples():
    assert hamming_distance("ABC", "ABC") == 0
    assert hamming_distance("ACGT", "AGGT") == 1
    assert hamming_distance("AAAA", "TTTT") == 4
    assert hamming_distance("AB", "ABC") is None


def test_edit_examples():
    assert edit_distance("", "abc") == 3
    assert edit_distance("abc", "abc") == 0
    assert edit_distance("kitten", "sitting") == 3


def test_wildcard_examples():
    assert wildcard_mismatch("a?c", "abc") is True
    assert wildcard_mismatch("a?c", "abd") is False
    assert wildcard_mismatch("???", "xyz") is True
    with pytest.raises(ParameterError):
        wildcard_mismatch("ab", "abc")


@given(dna, dna)
def test_symmetry(a, b):
    assert hamming_distance(a, b) == hamming_distance(b, a)
    assert edit_distance(a, b) == edit_distance(b, a)


@given(dna, dna, dna)
def test_edit_triangle(a, b, c):
    assert edit_distance(a, c) <= edit_distance(a, b) + edit_distance(b, c)


@given(dna, dna)
def test_edit_below_hamming(a, b):
    h = hamming_distance(a, b)
    if h is not None:
        assert edit_distance(a, b) <= h


@given(st.text(alphabet="ACGT?", min_size=1, max_size=10), dna)
def test_wildcard_vs_hamming(p, w):
    if len(p) != len(w) or "?" in w:
        return
    if "?" not in p:
        assert wildcard_mismatch(p, w) == (hamming_distance(p, w) == 0)


@given(dna, dna, st.integers(min_value=0, max_value=4))
def test_bounded_edit_agrees(a, b, k):
    d = edit_distance(a, b)
    bounded = edit_distance_at_most(a, b, k)
    if d <= k:
        assert bounded == d
    else:
        assert bounded is None


@given(st.text(alphabet="ACGT", min_size=4, max_size=30),
       st.text(alphabet="ACGT", min_size=2, max_size=6),
       st.integers(min_value=0, max_value=2))
def test_window_edit_matches_bruteforce(text, pattern, k):
    m = len(pattern)
    for start in range(1, len(text) + 1):
        best = None
        for length in range(max(0, m - k), m + k + 1):
            if start - 1 + length > len(text):
                break
            d = edit_distance(text[start - 1 : start - 1 + length], pattern)
            if best is None or d < best:
                best = d
        expected = best if best is not None and best <= k else None
        assert window_edit_distance(text, start, pattern, k) == expected
