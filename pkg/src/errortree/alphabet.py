"""Alphabets, stored sequences and query patterns.

Sequences are kept in one arena of immutable strings; trees reference
them by (sequence id, start, length) instead of copying symbol data.
Terminator symbols live outside the alphabet: the suffix tree uses one
unique terminator per sequence (drawn from a private code-point range)
and the compact trie uses a single shared end marker.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError, ParameterError

# Private-use plane 16 gives us > 65k distinct per-sequence terminators.
_TERMINATOR_BASE = 0x100000
# Shared trie end marker and the marker edge used by ensure_leaf_at.
TRIE_END = "\x00"
ANCHOR_MARK = "\x01"


def terminator_for(seq_id: int) -> str:
    return chr(_TERMINATOR_BASE + seq_id)


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of distinct symbols plus a reserved wildcard."""

    name: str
    symbols: str
    wildcard: str = "?"

    def __post_init__(self) -> None:
        if len(set(self.symbols)) != len(self.symbols):
            raise ParameterError("alphabet symbols must be distinct")
        if self.size < 2:
            raise ParameterError("alphabet needs at least 2 symbols")
        if len(self.wildcard) != 1 or self.wildcard in self.symbols:
            raise ParameterError("wildcard must be a single symbol outside the alphabet")

    @property
    def size(self) -> int:
        return len(self.symbols)

    def validate(self, data: str, what: str = "input") -> None:
        """Reject any symbol outside the alphabet, reporting its offset."""
        allowed = set(self.symbols)
        for off, ch in enumerate(data):
            if ch not in allowed:
                raise InputError(f"{what}: symbol {ch!r} at offset {off + 1} is not in alphabet {self.name!r}")

    def validate_pattern(self, data: str) -> None:
        allowed = set(self.symbols)
        allowed.add(self.wildcard)
        for off, ch in enumerate(data):
            if ch not in allowed:
                raise InputError(f"pattern: symbol {ch!r} at offset {off + 1} is not in alphabet {self.name!r}")


DNA = Alphabet("dna", "ACGT")
# Printable ASCII minus the default wildcard '?' and space.
ASCII = Alphabet("ascii", "".join(chr(c) for c in range(0x21, 0x7F) if chr(c) != "?"))

ALPHABETS = {a.name: a for a in (DNA, ASCII)}


def get_alphabet(name: str) -> Alphabet:
    try:
        return ALPHABETS[name]
    except KeyError:
        raise ParameterError(f"unknown alphabet {name!r}; known: {sorted(ALPHABETS)}") from None


@dataclass(frozen=True)
class Sequence:
    """One stored subject string. Positions are 1-based in every interface."""

    id: int
    data: str

    def __post_init__(self) -> None:
        if len(self.data) < 1:
            raise ParameterError(f"sequence {self.id}: length must be >= 1")

    @property
    def length(self) -> int:
        return len(self.data)

    @property
    def terminator(self) -> str:
        return terminator_for(self.id)

    def symbol(self, pos: int) -> str:
        """Symbol at 1-based pos; position length+1 is the terminator."""
        if pos == len(self.data) + 1:
            return self.terminator
        return self.data[pos - 1]


@dataclass(frozen=True)
class Pattern:
    """A query string over the alphabet, possibly containing wildcards."""

    data: str
    wildcard: str = "?"
    wildcard_positions: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        if len(self.data) < 1:
            raise ParameterError("pattern length must be >= 1")
        object.__setattr__(
            self,
            "wildcard_positions",
            tuple(i + 1 for i, ch in enumerate(self.data) if ch == self.wildcard),
        )

    @property
    def length(self) -> int:
        return len(self.data)


def make_sequences(strings: list[str], alphabet: Alphabet) -> list[Sequence]:
    """Wrap raw strings into Sequence objects with 0-based subject ids."""
    if not strings:
        raise InputError("empty input: no sequences")
    seqs = []
    for i, s in enumerate(strings):
        alphabet.validate(s, what=f"sequence {i}")
        if not s:
            raise InputError(f"sequence {i}: empty string")
        seqs.append(Sequence(i, s))
    return seqs
