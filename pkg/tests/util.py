"""Shared test helpers: dump writers, random graph builders, oracles.

The oracles here deliberately re-derive expected answers from raw data
(brute-force sorts, networkx SCCs, restated file headers) instead of
calling the code paths they check.
"""

from __future__ import annotations

import random
from pathlib import Path

from treenav.graph import ConceptGraph, ConceptNode, normalize_label
from treenav.ingest import DumpBundle, parse_dump
from treenav.merge import BuildReport, build_from_bundle

# Restated independently from the package so header drift breaks a test.
DUMP_HEADERS = {
    "pages.tsv": "page_id\tkind\ttitle\tdescription",
    "redirects.tsv": "from_page_id\tto_page_id",
    "category_links.tsv": "member_page_id\tcategory_page_id",
    "page_links.tsv": "from_article_page_id\tto_article_page_id",
    "disambig.tsv": "term\tcandidate_page_id",
}


def write_dump(
    dirpath: Path,
    pages=(),
    redirects=(),
    category_links=(),
    page_links=(),
    disambig=(),
) -> dict[str, Path]:
    """Write the five dump files from row tuples; returns name -> path."""
    contents = {
        "pages.tsv": [f"{pid}\t{kind}\t{title}\t{desc}" for pid, kind, title, desc in pages],
        "redirects.tsv": [f"{a}\t{b}" for a, b in redirects],
        "category_links.tsv": [f"{a}\t{b}" for a, b in category_links],
        "page_links.tsv": [f"{a}\t{b}" for a, b in page_links],
        "disambig.tsv": [f"{t}\t{c}" for t, c in disambig],
    }
    paths = {}
    for name, rows in contents.items():
        path = Path(dirpath) / name
        path.write_text("\n".join([DUMP_HEADERS[name], *rows]) + "\n", encoding="utf-8")
        paths[name] = path
    return paths


def parse_dir(dirpath: Path) -> DumpBundle:
    names = ["pages.tsv", "redirects.tsv", "category_links.tsv", "page_links.tsv", "disambig.tsv"]
    handles = [open(Path(dirpath) / n, "rb") for n in names]
    try:
        return parse_dump(*handles)
    finally:
        for fh in handles:
            fh.close()


def build_dir(dirpath: Path) -> tuple[ConceptGraph, BuildReport]:
    return build_from_bundle(parse_dir(dirpath))


def node_by_label(graph: ConceptGraph, label: str) -> int:
    """Resolve a unique fixture node by (normalized) label; fails if ambiguous."""
    ids = graph.lookup_label(label)
    matches = [n for n in ids if graph.node_by_id(n).canonical_label == label] or sorted(ids)
    assert len(matches) == 1, f"label {label!r} resolves to {sorted(ids)}"
    return matches[0]


def labels(graph: ConceptGraph, ids) -> list[str]:
    return [graph.node_by_id(n).canonical_label for n in ids]


# -- random graph construction -------------------------------------------------


def build_random_graph(
    seed: int,
    max_nodes: int = 500,
    cycles: int = 0,
    self_loops: int = 0,
    max_inlinks: int = 5,
) -> ConceptGraph:
    """A structurally valid random graph, acyclic unless cycles are injected.

    Small inlink range on purpose: ties must be common so ordering bugs
    surface.  Labels are distinct by construction and never eponymous.
    """
    rng = random.Random(seed)
    n = rng.randint(2, max_nodes)

    nodes: list[ConceptNode] = []
    for i in range(n):
        roll = rng.random()
        article = 1000 + i if roll < 0.75 else None
        category = 2000 + i if (roll >= 0.5 or article is None) else None
        aliases = frozenset({f"alt {i:04d}"}) if rng.random() < 0.2 else frozenset()
        nodes.append(
            ConceptNode(
                node_id=i,
                canonical_label=f"concept {i:04d}",
                article=article,
                category=category,
                aliases=aliases,
                description=f"random node {i}" if rng.random() < 0.3 else None,
            )
        )

    broader: list[set[int]] = [set() for _ in range(n)]
    categories = [i for i in range(n) if nodes[i].category is not None]
    for i in range(1, n):
        candidates = [c for c in categories if c < i]
        if not candidates:
            continue
        for parent in rng.sample(candidates, k=min(len(candidates), rng.randint(0, 3))):
            broader[i].add(parent)

    for _ in range(cycles):
        size = rng.choice((2, 3))
        if len(categories) < size:
            break
        ring = rng.sample(categories, k=size)
        for a, b in zip(ring, ring[1:] + ring[:1]):
            if a != b:
                broader[a].add(b)

    branches: list[set[int]] = [set() for _ in range(n)]
    leaves: list[set[int]] = [set() for _ in range(n)]
    for child in range(n):
        for parent in broader[child]:
            if nodes[child].category is not None:
                branches[parent].add(child)
            else:
                leaves[parent].add(child)

    inlinks = [
        rng.randint(0, max_inlinks) if nodes[i].article is not None else 0 for i in range(n)
    ]

    label_index: dict[str, list[int]] = {}
    for node in nodes:
        for name in (node.canonical_label, *node.aliases):
            label_index.setdefault(normalize_label(name), []).append(node.node_id)

    loops = tuple(sorted(rng.sample(range(n), k=min(self_loops, n))))
    graph = ConceptGraph(
        nodes=nodes,
        broader=[tuple(sorted(s)) for s in broader],
        narrower_branches=[tuple(sorted(s)) for s in branches],
        narrower_leaves=[tuple(sorted(s)) for s in leaves],
        inlinks=inlinks,
        label_index={k: tuple(v) for k, v in label_index.items()},
        self_loop_nodes=loops,
    )
    graph.validate()
    return graph


# -- independent oracles --------------------------------------------------------


def oracle_leaf_order(graph: ConceptGraph, node_id: int) -> list[int]:
    """Brute-force leaf ranking: inlinks desc, label asc, id asc."""
    return sorted(
        graph.leaves_of(node_id),
        key=lambda m: (-graph.inlinks_of(m), graph.node_by_id(m).canonical_label, m),
    )


def oracle_cycles(graph: ConceptGraph) -> list[list[int]]:
    """Cycle list computed by networkx SCCs plus recorded self-loops."""
    import networkx as nx

    g = nx.DiGraph()
    g.add_nodes_from(range(len(graph)))
    for nid in range(len(graph)):
        for parent in graph.broader_of(nid):
            g.add_edge(nid, parent)
    out = [sorted(c) for c in nx.strongly_connected_components(g) if len(c) >= 2]
    out.extend([nid] for nid in graph.self_loop_nodes)
    out.sort(key=lambda c: (c[0], len(c), c))
    return out
