"""User-facing queries: keyword disambiguation, tree results, sidestep.

A results page pairs tree results (the term groups computed here) with link
results (see ``treenav.folksonomy``).  Tree results split a node's immediate
hierarchy three ways: ``generalize`` climbs to broader concepts, ``branches``
are narrower terms that can be specified further, ``leaves`` are terminal
narrower terms ranked by how many other articles link to them.

All operations are stateless reads over a frozen graph and are safe under
unrestricted concurrent calls.  Every list order is a documented total order,
so identical inputs always produce identical answers.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

from .graph import ConceptGraph, normalize_label

DEFAULT_LEAF_LIMIT = 20  # page-sized display cut: top 20 of possibly ~1000 leaves
DEFAULT_CANDIDATE_LIMIT = 10


@dataclass(frozen=True)
class DisambiguationCandidate:
    """One meaning offered for an ambiguous keyword."""

    node_id: int
    label: str
    description: str = ""


@dataclass(frozen=True)
class TermRef:
    """A clickable term: its node, label, leaf/branch flag, and rank signal."""

    node_id: int
    label: str
    is_branch: bool
    inlink_count: int


@dataclass(frozen=True)
class TreeResults:
    generalize: tuple[TermRef, ...]
    branches: tuple[TermRef, ...]
    leaves: tuple[TermRef, ...]
    leaves_total: int


@dataclass(frozen=True)
class SidestepEntry:
    """Sister concepts under one parent: the parent and its ranked leaves."""

    parent: TermRef
    leaves: tuple[TermRef, ...]
    leaves_total: int


def term_ref(graph: ConceptGraph, node_id: int) -> TermRef:
    node = graph.node_by_id(node_id)
    has_children = bool(graph.branches_of(node_id) or graph.leaves_of(node_id))
    return TermRef(
        node_id=node_id,
        label=node.canonical_label,
        is_branch=node.category is not None and has_children,
        inlink_count=graph.inlinks_of(node_id),
    )


def _by_label(graph: ConceptGraph, ids) -> list[int]:
    return sorted(ids, key=lambda n: (graph.node_by_id(n).canonical_label, n))


def _by_inlinks(graph: ConceptGraph, ids) -> list[int]:
    return sorted(
        ids, key=lambda n: (-graph.inlinks_of(n), graph.node_by_id(n).canonical_label, n)
    )


def tree_results(
    graph: ConceptGraph, node_ref: int, leaf_limit: int = DEFAULT_LEAF_LIMIT
) -> TreeResults:
    """The three term groups for one node, leaves ranked and truncated.

    Leaves are ordered by inlink count descending (ties by label ascending,
    then node id); ``leaves_total`` is the count before truncation.
    """
    if leaf_limit < 1:
        raise ValueError(f"leaf_limit must be positive, got {leaf_limit}")
    graph.node_by_id(node_ref)
    leaf_ids = _by_inlinks(graph, graph.leaves_of(node_ref))
    return TreeResults(
        generalize=tuple(term_ref(graph, n) for n in _by_label(graph, graph.broader_of(node_ref))),
        branches=tuple(term_ref(graph, n) for n in _by_label(graph, graph.branches_of(node_ref))),
        leaves=tuple(term_ref(graph, n) for n in leaf_ids[:leaf_limit]),
        leaves_total=len(leaf_ids),
    )


def sidestep(
    graph: ConceptGraph, node_ref: int, leaf_limit: int = DEFAULT_LEAF_LIMIT
) -> list[SidestepEntry]:
    """Sister concepts: for each parent, its ranked leaves minus the node itself."""
    if leaf_limit < 1:
        raise ValueError(f"leaf_limit must be positive, got {leaf_limit}")
    graph.node_by_id(node_ref)
    entries = []
    for parent in _by_label(graph, graph.broader_of(node_ref)):
        siblings = [n for n in _by_inlinks(graph, graph.leaves_of(parent)) if n != node_ref]
        entries.append(
            SidestepEntry(
                parent=term_ref(graph, parent),
                leaves=tuple(term_ref(graph, n) for n in siblings[:leaf_limit]),
                leaves_total=len(siblings),
            )
        )
    return entries


def _prefix_matches(graph: ConceptGraph, key: str) -> list[int]:
    keys = graph.sorted_label_keys
    hits: set[int] = set()
    pos = bisect_left(keys, key)
    while pos < len(keys) and keys[pos].startswith(key):
        hits.update(graph.label_index[keys[pos]])
        pos += 1
    return _by_inlinks(graph, hits)


def disambiguate(
    graph: ConceptGraph, keyword: str, limit: int = DEFAULT_CANDIDATE_LIMIT
) -> list[DisambiguationCandidate]:
    """Candidate meanings for a keyword, best first.

    Three tiers, deduplicated by node: explicit disambiguation entries for
    the normalized keyword (in dump order), then exact label/alias matches,
    then prefix matches over the label index; the last two tiers are ordered
    by inlink count descending, then label.  An empty list is a valid answer.
    """
    if limit < 1:
        raise ValueError(f"limit must be positive, got {limit}")
    key = normalize_label(keyword)
    if not key:
        return []

    ordered: list[int] = []
    seen: set[int] = set()
    tiers = (
        graph.disambig_index.get(key, ()),
        _by_inlinks(graph, graph.label_index.get(key, ())),
        _prefix_matches(graph, key),
    )
    for tier in tiers:
        for nid in tier:
            if nid not in seen:
                seen.add(nid)
                ordered.append(nid)
            if len(ordered) == limit:
                break
        if len(ordered) == limit:
            break

    return [
        DisambiguationCandidate(
            node_id=nid,
            label=graph.node_by_id(nid).canonical_label,
            description=graph.node_by_id(nid).description or "",
        )
        for nid in ordered
    ]
