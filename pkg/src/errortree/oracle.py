"""Brute-force reference scans defining ground truth for every query kind.

No index structure is used anywhere here: each scan walks the whole
dictionary or text. The text-edit semantics (start positions, window
lengths in [m-k, m+k]) are fixed by `window_edit_distance` and inherited
by the index verification so both sides are comparable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .distances import (edit_distance_at_most, hamming_distance,
                        wildcard_extra_mismatches, window_edit_distance)
from .errors import InputError

HAMMING = "hamming"
EDIT = "edit"
WILDCARD = "wildcard"


@dataclass(frozen=True, order=True)
class MatchResult:
    """One verified match: subject id (dictionary) or 1-based text position."""

    subject: int
    distance: int
    kind: str


def scan_dict_hamming(strings: list[str], pattern: str, k: int) -> set[MatchResult]:
    out = set()
    for sid, s in enumerate(strings):
        d = hamming_distance(pattern, s)
        if d is not None and d <= k:
            out.add(MatchResult(sid, d, HAMMING))
    return out


def scan_dict_edit(strings: list[str], pattern: str, k: int) -> set[MatchResult]:
    out = set()
    for sid, s in enumerate(strings):
        d = edit_distance_at_most(pattern, s, k)
        if d is not None:
            out.add(MatchResult(sid, d, EDIT))
    return out


def scan_text_hamming(text: str, pattern: str, k: int) -> set[MatchResult]:
    m = len(pattern)
    out = set()
    for p in range(len(text) - m + 1):
        d = 0
        for a, b in zip(pattern, text[p:p + m]):
            if a != b:
                d += 1
                if d > k:
                    break
        if d <= k:
            out.add(MatchResult(p + 1, d, HAMMING))
    return out


def scan_text_edit(text: str, pattern: str, k: int) -> set[MatchResult]:
    out = set()
    for p in range(1, len(text) + 1):
        d = window_edit_distance(text, p, pattern, k)
        if d is not None:
            out.add(MatchResult(p, d, EDIT))
    return out


def scan_wildcard_dict(strings: list[str], pattern: str, extra_budget: int = 0,
                       wildcard: str = "?") -> set[MatchResult]:
    """Equal-length strings agreeing with pattern outside wildcards, allowing
    up to extra_budget additional mismatches at non-wildcard positions."""
    out = set()
    for sid, s in enumerate(strings):
        d = wildcard_extra_mismatches(pattern, s, wildcard)
        if d is not None and d <= extra_budget:
            out.add(MatchResult(sid, d, WILDCARD))
    return out


def scan_wildcard_text(text: str, pattern: str, extra_budget: int = 0,
                       wildcard: str = "?") -> set[MatchResult]:
    m = len(pattern)
    if any(ch == "\x00" for ch in pattern):
        raise InputError("pattern contains a reserved symbol")
    out = set()
    for p in range(len(text) - m + 1):
        d = wildcard_extra_mismatches(pattern, text[p:p + m], wildcard)
        if d is not None and d <= extra_budget:
            out.add(MatchResult(p + 1, d, WILDCARD))
    return out
