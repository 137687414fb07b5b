"""Error-tree index for approximate string matching.

Build a keyed suffix tree plus per-node error tables over a dictionary or a
text, then answer k-Hamming, k-edit and k-wildcard queries whose results are
always re-verified against the exact distance primitives.
"""

from .alphabet import ALPHABETS, ASCII, DNA, Alphabet, Pattern, Sequence, get_alphabet
from .distances import (edit_distance, edit_distance_at_most, hamming_distance,
                        wildcard_mismatch, window_edit_distance)
from .error_tree import (DICTIONARY, TEXT, ErrorTree, TableStats,
                         anchor_shifted_tails, build_compact_trie,
                         build_dictionary_index, build_indel_tables,
                         build_level_1, build_level_k, build_text_index,
                         growth_ratio, stats)
from .errors import (CapabilityError, ChecksumError, ErrorTreeError, FormatError,
                     InputError, ModeError, ParameterError, PersistenceError,
                     SuffixLookupError, VersionError)
from .oracle import (MatchResult, scan_dict_edit, scan_dict_hamming,
                     scan_text_edit, scan_text_hamming, scan_wildcard_dict,
                     scan_wildcard_text)
from .persistence import load, save
from .query import (PatternWalkSet, prepare_pattern, query_edit, query_hamming,
                    query_text_edit, query_text_hamming, query_text_wildcard,
                    query_wildcard)
from .suffix_tree import KeyedSuffixTree, WalkTrace, build_gst

__version__ = "0.1.0"

__all__ = [
    "ALPHABETS", "ASCII", "DNA", "Alphabet", "Pattern", "Sequence", "get_alphabet",
    "hamming_distance", "edit_distance", "edit_distance_at_most",
    "wildcard_mismatch", "window_edit_distance",
    "KeyedSuffixTree", "WalkTrace", "build_gst",
    "DICTIONARY", "TEXT", "ErrorTree", "TableStats", "build_compact_trie",
    "build_dictionary_index", "build_text_index", "build_level_1",
    "build_level_k", "build_indel_tables", "anchor_shifted_tails",
    "stats", "growth_ratio",
    "MatchResult", "scan_dict_hamming", "scan_dict_edit", "scan_text_hamming",
    "scan_text_edit", "scan_wildcard_dict", "scan_wildcard_text",
    "PatternWalkSet", "prepare_pattern", "query_hamming", "query_edit",
    "query_wildcard", "query_text_hamming", "query_text_edit", "query_text_wildcard",
    "save", "load",
    "ErrorTreeError", "InputError", "ParameterError", "CapabilityError",
    "ModeError", "SuffixLookupError", "PersistenceError", "FormatError",
    "VersionError", "ChecksumError",
]
