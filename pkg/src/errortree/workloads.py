"""Random corpora and planted-error patterns for verification and benchmarks.

A planted pattern is synthesized from an indexed string (or text window) by
applying a known number of edit operations, so the expected result set is
guaranteed non-trivial; uniform patterns probe the empty/sparse side.
"""

from __future__ import annotations

import random

from .alphabet import Alphabet


def random_string(rng: random.Random, length: int, alphabet: Alphabet) -> str:
    return "".join(rng.choice(alphabet.symbols) for _ in range(length))


def random_dictionary(rng: random.Random, n: int, min_len: int, max_len: int,
                      alphabet: Alphabet) -> list[str]:
    return [random_string(rng, rng.randint(min_len, max_len), alphabet) for _ in range(n)]


def plant_substitutions(rng: random.Random, s: str, j: int, alphabet: Alphabet) -> str:
    """Apply exactly j substitutions at distinct positions (j <= len(s))."""
    j = min(j, len(s))
    out = list(s)
    for pos in rng.sample(range(len(s)), j):
        out[pos] = rng.choice([c for c in alphabet.symbols if c != out[pos]])
    return "".join(out)


def plant_edits(rng: random.Random, s: str, j: int, alphabet: Alphabet) -> str:
    """Apply j random operations (substitution / insertion / deletion)."""
    out = list(s)
    for _ in range(j):
        op = rng.choice(("sub", "ins", "del")) if len(out) > 1 else rng.choice(("sub", "ins"))
        if op == "sub" and out:
            pos = rng.randrange(len(out))
            out[pos] = rng.choice([c for c in alphabet.symbols if c != out[pos]])
        elif op == "ins":
            pos = rng.randint(0, len(out))
            out.insert(pos, rng.choice(alphabet.symbols))
        elif out:
            out.pop(rng.randrange(len(out)))
    return "".join(out) if out else rng.choice(alphabet.symbols)


def plant_wildcards(rng: random.Random, s: str, w: int, wildcard: str) -> str:
    w = min(w, len(s))
    out = list(s)
    for pos in rng.sample(range(len(s)), w):
        out[pos] = wildcard
    return "".join(out)


def pattern_batch(rng: random.Random, strings: list[str], count: int, k: int,
                  metric: str, alphabet: Alphabet, length: int | None = None) -> list[str]:
    """Half planted-error patterns drawn from `strings` (or windows of a text
    passed as a one-element list), half uniform random patterns.

    With `length` set (text mode) every pattern is re-fit to exactly that
    length, since text indexes answer one pattern length only.
    """
    out = []
    for i in range(count):
        base = rng.choice(strings)
        if length is not None:
            if len(base) > length:
                start = rng.randint(0, len(base) - length)
                base = base[start : start + length]
            plen = length
        else:
            plen = len(base)
        if i < (count + 1) // 2:
            if metric == "edit":
                pattern = plant_edits(rng, base, rng.randint(0, k), alphabet) or base
            elif metric == "wildcard":
                pattern = plant_wildcards(rng, base, rng.randint(0, k), alphabet.wildcard)
            else:
                pattern = plant_substitutions(rng, base, rng.randint(0, k), alphabet)
        else:
            pattern = random_string(rng, plen, alphabet)
        if length is not None:
            if len(pattern) > length:
                pattern = pattern[:length]
            elif len(pattern) < length:
                pattern += random_string(rng, length - len(pattern), alphabet)
        out.append(pattern)
    return out
