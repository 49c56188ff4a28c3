"""QQ-SPM spatial pattern matching: IL-Quadtree index, QQESPM engine, baselines."""

from ._qqespm import (
    DataError,
    Index,
    ParseError,
    Pattern,
    Poi,
    __version__,
    brute_force_query,
    build_index,
    load_pois_csv,
    parse_pattern,
    qq_simple_query,
    qqespm_query,
    relation_holds,
    satisfied_predicates,
    z_test_means,
)

__all__ = [
    "DataError",
    "Index",
    "ParseError",
    "Pattern",
    "Poi",
    "__version__",
    "brute_force_query",
    "build_index",
    "load_pois_csv",
    "parse_pattern",
    "qq_simple_query",
    "qqespm_query",
    "relation_holds",
    "satisfied_predicates",
    "z_test_means",
]
