"""Exact distance primitives: Hamming, Levenshtein and wildcard agreement.

These are the ground-truth comparators; both the brute-force oracle and
the index-side verification filter go through them, so they stay free of
any index machinery.
"""

from __future__ import annotations

from .errors import ParameterError


def hamming_distance(a: str, b: str) -> int | None:
    """Number of differing positions, or None when the lengths differ."""
    if len(a) != len(b):
        return None
    return sum(x != y for x, y in zip(a, b))


def edit_distance(a: str, b: str) -> int:
    """Unit-cost Levenshtein distance via the classic two-row DP."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def edit_distance_at_most(a: str, b: str, k: int) -> int | None:
    """Levenshtein distance if it is <= k, else None.

    Banded DP over the diagonal strip |i - j| <= k; cost O(max(m,n) * k).
    """
    la, lb = len(a), len(b)
    if abs(la - lb) > k:
        return None
    if k < 0:
        return None
    big = k + 1
    prev = {j: j for j in range(0, min(lb, k) + 1)}
    for i in range(1, la + 1):
        cur: dict[int, int] = {}
        lo = max(0, i - k)
        hi = min(lb, i + k)
        if lo == 0:
            cur[0] = i
            lo = 1
        for j in range(lo, hi + 1):
            best = prev.get(j - 1, big) + (a[i - 1] != b[j - 1])
            up = prev.get(j, big) + 1
            if up < best:
                best = up
            left = cur.get(j - 1, big) + 1
            if left < best:
                best = left
            cur[j] = best
        if not cur or min(cur.values()) > k:
            return None
        prev = cur
    d = prev.get(lb, big)
    return d if d <= k else None


def wildcard_mismatch(pattern: str, window: str, wildcard: str = "?") -> bool:
    """True iff every non-wildcard pattern position equals the window symbol.

    Precondition: equal lengths (a wildcard query compares whole windows).
    """
    if len(pattern) != len(window):
        raise ParameterError("wildcard_mismatch: pattern and window lengths differ")
    return all(p == wildcard or p == w for p, w in zip(pattern, window))


def wildcard_extra_mismatches(pattern: str, window: str, wildcard: str = "?") -> int | None:
    """Count of non-wildcard positions that differ, or None on length mismatch."""
    if len(pattern) != len(window):
        return None
    return sum(p != wildcard and p != w for p, w in zip(pattern, window))


def window_edit_distance(text: str, start: int, pattern: str, k: int) -> int | None:
    """Minimal edit distance of pattern to any window text[start..start+L-1].

    start is 1-based; L ranges over [m-k, m+k] clipped to the text. This is
    the banded-window semantics shared by the oracle and the text-mode index
    verification, so both report identical position sets. Returns None when
    no window comes within k.
    """
    m = len(pattern)
    window = text[start - 1 : start - 1 + m + k]
    lw = len(window)
    if lw < m - k:
        return None
    big = k + 1
    # DP rows over window prefixes; collect distances at admissible lengths.
    prev = {j: j for j in range(0, min(m, k) + 1)}
    best = prev.get(m, big) if 0 >= m - k else big
    for i in range(1, lw + 1):
        cur: dict[int, int] = {}
        lo = max(0, i - k)
        hi = min(m, i + k)
        if lo == 0:
            cur[0] = i
            lo = 1
        for j in range(lo, hi + 1):
            b = prev.get(j - 1, big) + (window[i - 1] != pattern[j - 1])
            up = prev.get(j, big) + 1
            if up < b:
                b = up
            left = cur.get(j - 1, big) + 1
            if left < b:
                b = left
            cur[j] = b
        if m - k <= i <= m + k:
            d = cur.get(m, big)
            if d < best:
                best = d
        if not cur or min(cur.values()) > k:
            break
        prev = cur
    return best if best <= k else None
