"""Exception hierarchy shared by the whole package.

The CLI maps these onto process exit codes, so keep the split stable:
input problems, capability/mode problems, and persistence problems are
distinct classes.
"""


class ErrorTreeError(Exception):
    """Base class for all package errors."""


class InputError(ErrorTreeError):
    """Bad input data: symbol outside the alphabet, empty input, bad file."""


class ParameterError(ErrorTreeError):
    """Invalid parameter value (k < 0, empty pattern, m <= 0, ...)."""


class CapabilityError(ErrorTreeError):
    """The index cannot answer this query (k too large, indels not built)."""


class ModeError(ErrorTreeError):
    """Query incompatible with the index mode (e.g. pattern length != m)."""


class SuffixLookupError(ErrorTreeError):
    """A (sequence id, start) pair does not name an indexed suffix."""


class PersistenceError(ErrorTreeError):
    """Base class for serialization problems."""


class FormatError(PersistenceError):
    """Bad magic bytes or a structurally broken image."""


class VersionError(PersistenceError):
    """Image written by a newer format version."""


class ChecksumError(PersistenceError):
    """Image body does not match its checksum."""
