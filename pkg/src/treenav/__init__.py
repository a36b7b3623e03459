"""Concept-hierarchy navigation over tagged bookmarks.

The package builds a polyhierarchy of concepts from encyclopedia dump
files (articles, categories, redirects, disambiguation pages), pairs it
with a tagged-bookmark corpus, and answers the navigation queries a
results page needs: disambiguate a keyword, generalize, specify, sidestep,
and fetch popular/recent link results for a concept.
"""

from .folksonomy import (
    DEFAULT_LINK_LIMIT,
    DEFAULT_POPULAR_THRESHOLD,
    BookmarkStore,
    FeedKind,
    LinkResult,
    tag_variants,
)
from .graph import (
    ConceptGraph,
    ConceptNode,
    PageKind,
    TreenavError,
    UnknownNodeError,
    cycle_report,
    normalize_label,
)
from .ingest import (
    Bookmark,
    CorruptStoreError,
    DanglingReferenceError,
    DumpBundle,
    DuplicatePageIdError,
    DuplicateUrlError,
    FormatError,
    PageRecord,
    RawLink,
    VersionMismatchError,
    load_graph,
    parse_bookmarks,
    parse_dump,
    save_graph,
)
from .merge import (
    BuildReport,
    RedirectCycleError,
    RedirectToMissingError,
    build_from_bundle,
    build_graph,
    merge_eponymous,
    resolve_redirects,
)
from .query import (
    DEFAULT_CANDIDATE_LIMIT,
    DEFAULT_LEAF_LIMIT,
    DisambiguationCandidate,
    SidestepEntry,
    TermRef,
    TreeResults,
    disambiguate,
    sidestep,
    term_ref,
    tree_results,
)

__all__ = [
    "BookmarkStore",
    "Bookmark",
    "BuildReport",
    "ConceptGraph",
    "ConceptNode",
    "CorruptStoreError",
    "DEFAULT_CANDIDATE_LIMIT",
    "DEFAULT_LEAF_LIMIT",
    "DEFAULT_LINK_LIMIT",
    "DEFAULT_POPULAR_THRESHOLD",
    "DanglingReferenceError",
    "DisambiguationCandidate",
    "DumpBundle",
    "DuplicatePageIdError",
    "DuplicateUrlError",
    "FeedKind",
    "FormatError",
    "LinkResult",
    "PageKind",
    "PageRecord",
    "RawLink",
    "RedirectCycleError",
    "RedirectToMissingError",
    "SidestepEntry",
    "TermRef",
    "TreeResults",
    "TreenavError",
    "UnknownNodeError",
    "VersionMismatchError",
    "build_from_bundle",
    "build_graph",
    "cycle_report",
    "disambiguate",
    "load_graph",
    "merge_eponymous",
    "normalize_label",
    "parse_bookmarks",
    "parse_dump",
    "resolve_redirects",
    "save_graph",
    "sidestep",
    "tag_variants",
    "term_ref",
    "tree_results",
]

__version__ = "0.1.0"
