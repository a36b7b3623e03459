"""Frozen in-memory concept graph: merged nodes, hierarchy edges, label indexes.

A node fuses up to two encyclopedia pages (an article and its eponymous
category) plus the redirect titles that point at them.  Edges run both ways:
``broader`` climbs toward more general concepts, ``narrower_branches`` /
``narrower_leaves`` descend to subcategories and member articles.  The graph
is built once (see ``treenav.merge``) and is read-only afterwards, so every
query here is safe under unrestricted concurrent access.

Category structures found in the wild are not reliably acyclic; cycles are
kept as-is and surfaced through ``cycle_report`` rather than rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

_WS_RUN = re.compile(r"\s+")
_CATEGORY_PREFIX = "category:"


class PageKind(Enum):
    """The raw page kinds a dump distinguishes; exactly one per page."""

    ARTICLE = "ARTICLE"
    CATEGORY = "CATEGORY"
    REDIRECT = "REDIRECT"
    DISAMBIG = "DISAMBIG"


class TreenavError(Exception):
    """Base class for all errors raised by this package."""


class UnknownNodeError(TreenavError):
    """A node id not present in the graph."""

    def __init__(self, node_id: int):
        self.node_id = node_id
        super().__init__(f"unknown node id: {node_id}")


def normalize_label(text: str) -> str:
    """Canonical form used for every label/alias comparison and index key.

    Trim, drop one leading "Category:" prefix, case-fold, and collapse
    internal whitespace runs to single spaces.
    """
    s = text.strip()
    if s[: len(_CATEGORY_PREFIX)].casefold() == _CATEGORY_PREFIX:
        s = s[len(_CATEGORY_PREFIX) :]
    return _WS_RUN.sub(" ", s.casefold()).strip()


@dataclass(frozen=True)
class ConceptNode:
    """One navigable concept, merged from an article and/or a category page.

    At least one of ``article`` / ``category`` (page ids) is present.
    ``aliases`` holds redirect titles that resolve to either facet; the
    canonical label itself never appears among them.
    """

    node_id: int
    canonical_label: str
    article: int | None = None
    category: int | None = None
    aliases: frozenset[str] = field(default_factory=frozenset)
    description: str | None = None

    def __post_init__(self) -> None:
        if self.article is None and self.category is None:
            raise ValueError(f"node {self.node_id} has neither facet")
        if not self.canonical_label:
            raise ValueError(f"node {self.node_id} has an empty label")


class ConceptGraph:
    """Immutable store of nodes, hierarchy edges, inlink counts, and indexes.

    Node ids are dense ``0..n-1`` list indexes.  Adjacency is kept as sorted
    id tuples so that every traversal and serialization is deterministic.
    """

    def __init__(
        self,
        nodes: list[ConceptNode],
        broader: list[tuple[int, ...]],
        narrower_branches: list[tuple[int, ...]],
        narrower_leaves: list[tuple[int, ...]],
        inlinks: list[int],
        label_index: dict[str, tuple[int, ...]],
        disambig_index: dict[str, tuple[int, ...]] | None = None,
        self_loop_nodes: tuple[int, ...] = (),
    ):
        n = len(nodes)
        if not (len(broader) == len(narrower_branches) == len(narrower_leaves) == len(inlinks) == n):
            raise ValueError("adjacency/inlink lists must match node count")
        self._nodes = tuple(nodes)
        self._broader = tuple(broader)
        self._branches = tuple(narrower_branches)
        self._leaves = tuple(narrower_leaves)
        self._inlinks = tuple(inlinks)
        self.label_index = {k: tuple(v) for k, v in sorted(label_index.items())}
        self.disambig_index = {k: tuple(v) for k, v in sorted((disambig_index or {}).items())}
        self.self_loop_nodes = tuple(sorted(self_loop_nodes))
        # Sorted key list backs binary-search prefix scans in the query layer.
        self.sorted_label_keys = tuple(self.label_index)

    # -- basic access --------------------------------------------------------

    def __len__(self) -> int:
        return len(self._nodes)

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    def iter_nodes(self):
        return iter(self._nodes)

    def _check(self, node_id: int) -> int:
        if not 0 <= node_id < len(self._nodes):
            raise UnknownNodeError(node_id)
        return node_id

    def node_by_id(self, node_id: int) -> ConceptNode:
        return self._nodes[self._check(node_id)]

    def broader_of(self, node_id: int) -> tuple[int, ...]:
        return self._broader[self._check(node_id)]

    def branches_of(self, node_id: int) -> tuple[int, ...]:
        return self._branches[self._check(node_id)]

    def leaves_of(self, node_id: int) -> tuple[int, ...]:
        return self._leaves[self._check(node_id)]

    def inlinks_of(self, node_id: int) -> int:
        return self._inlinks[self._check(node_id)]

    # -- label lookup --------------------------------------------------------

    def lookup_label(self, text: str) -> frozenset[int]:
        """All nodes whose canonical label or any alias normalizes to ``text``.

        An empty result is a valid answer; empty queries match nothing.
        """
        key = normalize_label(text)
        if not key:
            return frozenset()
        return frozenset(self.label_index.get(key, ()))

    # -- invariants ----------------------------------------------------------

    def validate(self) -> None:
        """Full-scan invariant check; raises ValueError on the first violation.

        Intended for tests and post-build assertions, not for hot paths.
        """
        seen_articles: dict[int, int] = {}
        seen_categories: dict[int, int] = {}
        for node in self._nodes:
            if node.article is not None:
                if node.article in seen_articles:
                    raise ValueError(f"article page {node.article} in two nodes")
                seen_articles[node.article] = node.node_id
            if node.category is not None:
                if node.category in seen_categories:
                    raise ValueError(f"category page {node.category} in two nodes")
                seen_categories[node.category] = node.node_id
            if node.canonical_label in node.aliases:
                raise ValueError(f"node {node.node_id} aliases its own label")
            if normalize_label(node.canonical_label).startswith(_CATEGORY_PREFIX):
                raise ValueError(f"node {node.node_id} label keeps a Category: prefix")

        for nid in range(len(self._nodes)):
            node = self._nodes[nid]
            if nid in self._broader[nid]:
                raise ValueError(f"self-edge on node {nid}")
            if node.article is None and self._inlinks[nid] != 0:
                raise ValueError(f"article-less node {nid} has inlinks")
            for parent in self._broader[nid]:
                in_branches = nid in self._branches[parent]
                in_leaves = nid in self._leaves[parent]
                if in_branches == in_leaves:
                    raise ValueError(f"edge {nid}->{parent} not in exactly one child list")
            for child in self._branches[nid]:
                if self._nodes[child].category is None:
                    raise ValueError(f"branch child {child} of {nid} lacks a category facet")
                if nid not in self._broader[child]:
                    raise ValueError(f"asymmetric branch edge {nid}->{child}")
            for child in self._leaves[nid]:
                child_node = self._nodes[child]
                if child_node.article is None or child_node.category is not None:
                    raise ValueError(f"leaf child {child} of {nid} has wrong facets")
                if nid not in self._broader[child]:
                    raise ValueError(f"asymmetric leaf edge {nid}->{child}")
            for name in {node.canonical_label, *node.aliases}:
                if nid not in self.label_index.get(normalize_label(name), ()):
                    raise ValueError(f"label index misses {name!r} -> {nid}")


def cycle_report(graph: ConceptGraph) -> list[list[int]]:
    """Cycles in the broader relation, as sorted node-id sequences.

    Reports every strongly connected component of size >= 2, plus every raw
    self-loop that was dropped at build time (kept on the graph object since
    the offending edge itself is gone).  An empty list means broader is
    acyclic.  Iterative Tarjan; immune to recursion limits.
    """
    n = graph.node_count
    index_of = [-1] * n
    lowlink = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index_of[root] != -1:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            node, edge_pos = work[-1]
            if edge_pos == 0:
                index_of[node] = lowlink[node] = counter
                counter += 1
                stack.append(node)
                on_stack[node] = True
            advanced = False
            neighbours = graph.broader_of(node)
            for i in range(edge_pos, len(neighbours)):
                w = neighbours[i]
                if index_of[w] == -1:
                    work[-1] = (node, i + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    lowlink[node] = min(lowlink[node], index_of[w])
            if advanced:
                continue
            work.pop()
            if lowlink[node] == index_of[node]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    component.append(w)
                    if w == node:
                        break
                if len(component) >= 2:
                    sccs.append(sorted(component))
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])

    cycles = [[nid] for nid in graph.self_loop_nodes]
    cycles.extend(sccs)
    cycles.sort(key=lambda c: (c[0], len(c), c))
    return cycles
