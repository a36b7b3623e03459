"""Redirect resolution and eponymous article/category merging.

An article and a category describe the same concept surprisingly often
("Ford Motor Company" vs "Category:Ford" when it works, "Food" vs
"Category:Foods" when a redirect bridges the plural).  This stage follows
redirect chains to their final pages, pairs articles with their eponymous
categories where membership plus a name match support it, and assembles the
frozen ConceptGraph.

Name matching is deliberately simple: exact equality under label
normalization, or equality with the title of a redirect resolving to the
article.  No stemming, no fuzzy similarity.  When several pairings compete,
an exact title match beats a redirect-mediated one, then the smaller
normalized title, then the smaller page id — determinism over cleverness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .graph import ConceptGraph, ConceptNode, PageKind, TreenavError, cycle_report, normalize_label
from .ingest import DumpBundle, PageRecord, RawLink


class RedirectCycleError(TreenavError):
    """A redirect chain that never reaches a non-redirect page."""

    def __init__(self, page_ids: list[int]):
        self.page_ids = page_ids
        super().__init__(f"redirect cycle through pages {page_ids}")


class RedirectToMissingError(TreenavError):
    def __init__(self, page_id: int, detail: str):
        self.page_id = page_id
        super().__init__(f"redirect page {page_id}: {detail}")


class RedirectResolution(NamedTuple):
    """Final non-redirect target per redirect page, and titles per target."""

    targets: dict[int, int]
    aliases: dict[int, set[str]]


@dataclass(frozen=True)
class SkippedRedirect:
    """A redirect whose final target owns no graph node (e.g. disambiguation)."""

    title: str
    target_page: int
    reason: str


@dataclass
class MergeResult:
    nodes: list[ConceptNode]
    merged_pairs: list[tuple[int, int]]  # (article page, category page)
    skipped_redirects: list[SkippedRedirect] = field(default_factory=list)


@dataclass
class BuildReport:
    """Counts and anomalies from one end-to-end build, for operator output."""

    page_counts: dict[str, int]
    node_count: int
    merged_count: int
    broader_edge_count: int
    cycles: list[list[int]]
    skipped_redirects: list[SkippedRedirect]


def resolve_redirects(
    redirects: Iterable[RawLink], pages: dict[int, PageRecord]
) -> RedirectResolution:
    """Follow every redirect chain to its final non-redirect page.

    Returns the final target per redirect page and, per target, the set of
    redirect titles that land on it.  Raises RedirectCycleError if a chain
    loops and RedirectToMissingError if a chain leaves the page set or a
    redirect page has no target row at all.
    """
    target_of = {link.src: link.dst for link in redirects}
    for pid in sorted(pages):
        if pages[pid].kind is PageKind.REDIRECT and pid not in target_of:
            raise RedirectToMissingError(pid, "no redirect target row")

    final: dict[int, int] = {}
    for start in sorted(target_of):
        if start in final:
            continue
        chain: list[int] = []
        on_chain: set[int] = set()
        cur = start
        while True:
            if cur in final:
                end = final[cur]
                break
            if cur in on_chain:
                cycle = chain[chain.index(cur) :]
                pivot = cycle.index(min(cycle))
                raise RedirectCycleError(cycle[pivot:] + cycle[:pivot])
            chain.append(cur)
            on_chain.add(cur)
            nxt = target_of.get(cur)
            if nxt is None:
                raise RedirectToMissingError(cur, "no redirect target row")
            nxt_rec = pages.get(nxt)
            if nxt_rec is None:
                raise RedirectToMissingError(cur, f"target page {nxt} does not exist")
            if nxt_rec.kind is not PageKind.REDIRECT:
                end = nxt
                break
            cur = nxt
        for pid in chain:
            final[pid] = end

    aliases: dict[int, set[str]] = {}
    for pid, end in final.items():
        aliases.setdefault(end, set()).add(pages[pid].title)
    return RedirectResolution(final, aliases)


def _category_display_label(title: str) -> str:
    return title[len("Category:") :].strip()


def merge_eponymous(
    pages: dict[int, PageRecord],
    memberships: Iterable[RawLink],
    resolution: RedirectResolution,
) -> MergeResult:
    """Pair articles with their eponymous categories and emit all nodes.

    An article A merges with category C iff A is a member of C and C's
    normalized title equals A's normalized title or the normalized title of a
    redirect resolving to A.  Matching is one-to-one under the documented
    tie-break.  Unmerged articles and categories become single-facet nodes;
    node ids are assigned densely by (canonical label, article page id).
    """
    member_pairs = {(link.src, link.dst) for link in memberships}

    article_names: dict[int, set[str]] = {}
    for pid, rec in pages.items():
        if rec.kind is PageKind.ARTICLE:
            article_names[pid] = {normalize_label(rec.title)}
    for rid, end in resolution.targets.items():
        if end in article_names:
            article_names[end].add(normalize_label(pages[rid].title))

    candidates = []
    for member, cat in member_pairs:
        if pages[member].kind is not PageKind.ARTICLE:
            continue
        cat_name = normalize_label(pages[cat].title)
        if cat_name not in article_names[member]:
            continue
        exact = 0 if cat_name == normalize_label(pages[member].title) else 1
        candidates.append((exact, cat_name, cat, normalize_label(pages[member].title), member))

    matched_articles: dict[int, int] = {}
    matched_categories: dict[int, int] = {}
    for exact, _cat_name, cat, _art_name, art in sorted(candidates):
        if art in matched_articles or cat in matched_categories:
            continue
        matched_articles[art] = cat
        matched_categories[cat] = art

    protos: list[tuple[str, int | None, int | None, str | None]] = []
    for pid in sorted(pages):
        rec = pages[pid]
        if rec.kind is PageKind.ARTICLE:
            cat = matched_articles.get(pid)
            desc = rec.description
            if desc is None and cat is not None:
                desc = pages[cat].description
            protos.append((rec.title, pid, cat, desc))
        elif rec.kind is PageKind.CATEGORY and pid not in matched_categories:
            protos.append((_category_display_label(rec.title), None, pid, rec.description))

    protos.sort(key=lambda p: (p[0], p[1] is None, p[1] if p[1] is not None else p[2]))

    facet_owner: dict[int, int] = {}
    for nid, (_, article, category, _) in enumerate(protos):
        if article is not None:
            facet_owner[article] = nid
        if category is not None:
            facet_owner[category] = nid

    alias_sets: list[set[str]] = [set() for _ in protos]
    skipped: list[SkippedRedirect] = []
    for end in sorted(resolution.aliases):
        nid = facet_owner.get(end)
        for title in sorted(resolution.aliases[end]):
            if nid is None:
                skipped.append(
                    SkippedRedirect(title, end, f"target is a {pages[end].kind.value} page")
                )
            elif title != protos[nid][0]:
                alias_sets[nid].add(title)

    nodes = [
        ConceptNode(nid, label, article, category, frozenset(alias_sets[nid]), desc)
        for nid, (label, article, category, desc) in enumerate(protos)
    ]
    merged = sorted((art, cat) for art, cat in matched_articles.items())
    return MergeResult(nodes, merged, skipped)


def build_graph(
    nodes: list[ConceptNode],
    memberships: Iterable[RawLink],
    page_links: Iterable[RawLink],
    disambig: Iterable[tuple[str, int]] = (),
) -> ConceptGraph:
    """Assemble the frozen graph from merged nodes and the raw link rows.

    Membership rows whose endpoints land on one node are dropped: raw
    self-loops (a category member of itself) are recorded for cycle_report,
    while edges collapsed by an eponymous merge vanish silently, which is
    exactly what the merge intends.
    """
    facet_owner: dict[int, int] = {}
    for node in nodes:
        if node.article is not None:
            facet_owner[node.article] = node.node_id
        if node.category is not None:
            facet_owner[node.category] = node.node_id

    n = len(nodes)
    broader: list[set[int]] = [set() for _ in range(n)]
    branches: list[set[int]] = [set() for _ in range(n)]
    leaves: list[set[int]] = [set() for _ in range(n)]
    self_loops: set[int] = set()

    for link in memberships:
        child = facet_owner[link.src]
        parent = facet_owner[link.dst]
        if child == parent:
            if link.src == link.dst:
                self_loops.add(parent)
            continue
        broader[child].add(parent)
        if nodes[child].category is not None:
            branches[parent].add(child)
        else:
            leaves[parent].add(child)

    sources_by_target: dict[int, set[int]] = {}
    for link in page_links:
        if link.src != link.dst:
            sources_by_target.setdefault(link.dst, set()).add(link.src)
    inlinks = [
        len(sources_by_target.get(node.article, ())) if node.article is not None else 0
        for node in nodes
    ]

    label_index: dict[str, set[int]] = {}
    for node in nodes:
        for name in {node.canonical_label, *node.aliases}:
            label_index.setdefault(normalize_label(name), set()).add(node.node_id)

    disambig_index: dict[str, list[int]] = {}
    for term, pid in disambig:
        key = normalize_label(term)
        nid = facet_owner[pid]
        bucket = disambig_index.setdefault(key, [])
        if nid not in bucket:
            bucket.append(nid)

    return ConceptGraph(
        nodes,
        [tuple(sorted(b)) for b in broader],
        [tuple(sorted(b)) for b in branches],
        [tuple(sorted(l)) for l in leaves],
        inlinks,
        {k: tuple(sorted(v)) for k, v in label_index.items()},
        {k: tuple(v) for k, v in disambig_index.items()},
        tuple(sorted(self_loops)),
    )


def build_from_bundle(bundle: DumpBundle) -> tuple[ConceptGraph, BuildReport]:
    """Run the whole pipeline: resolve, merge, build, and summarize."""
    resolution = resolve_redirects(bundle.redirects, bundle.pages)
    result = merge_eponymous(bundle.pages, bundle.memberships, resolution)
    graph = build_graph(result.nodes, bundle.memberships, bundle.page_links, bundle.disambig)

    page_counts = {kind.value: 0 for kind in PageKind}
    for rec in bundle.pages.values():
        page_counts[rec.kind.value] += 1
    report = BuildReport(
        page_counts=page_counts,
        node_count=graph.node_count,
        merged_count=len(result.merged_pairs),
        broader_edge_count=sum(len(graph.broader_of(nid)) for nid in range(graph.node_count)),
        cycles=cycle_report(graph),
        skipped_redirects=result.skipped_redirects,
    )
    return graph, report
