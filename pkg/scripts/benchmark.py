#!/usr/bin/env python3
"""Synthetic-corpus benchmark: build cost, store size, and query latency.

Generates a dump with the same shape as the real inputs (articles, eponymous
and plain categories, redirects, page links, disambiguation rows), pushes it
through parse -> merge -> save -> load, then times the hot query paths on the
loaded graph plus a synthetic bookmark corpus.  Deterministic under --seed.
"""

import argparse
import io
import random
import statistics
import time
from datetime import datetime, timedelta, timezone

from treenav.folksonomy import BookmarkStore, tag_variants
from treenav.ingest import Bookmark, load_graph, parse_dump, save_graph
from treenav.merge import build_from_bundle
from treenav.query import disambiguate, sidestep, tree_results
from treenav.service import node_variants


def synth_dump(rng: random.Random, articles: int, categories: int, links: int):
    """Five in-memory dump files with ~10% eponymous article/category pairs."""
    pages, redirects, memberships, page_links, disambig = [], [], [], [], []
    next_id = 1

    cat_ids = []
    for i in range(categories):
        cat_ids.append(next_id)
        pages.append((next_id, "CATEGORY", f"Category:Topic {i:05d}", ""))
        next_id += 1

    art_ids = []
    for j in range(articles):
        art_ids.append(next_id)
        if j < categories // 10:
            title = f"Topic {j:05d}"  # eponymous with category j
        else:
            title = f"Subject {j:05d}"
        desc = f"synthetic article {j}" if j % 3 == 0 else ""
        pages.append((next_id, "ARTICLE", title, desc))
        next_id += 1

    for j, art in enumerate(art_ids):
        wanted = {cat_ids[j % categories]}
        if j < categories // 10:
            wanted.add(cat_ids[j])
        wanted.update(rng.sample(cat_ids, k=rng.randint(0, 2)))
        memberships.extend((art, cat) for cat in wanted)
    for i, cat in enumerate(cat_ids[1:], start=1):
        memberships.append((cat, cat_ids[rng.randrange(i)]))

    for r in range(articles // 20):
        target = rng.choice(art_ids)
        pages.append((next_id, "REDIRECT", f"Alias {r:05d}", ""))
        redirects.append((next_id, target))
        next_id += 1

    for _ in range(links):
        src, dst = rng.choice(art_ids), rng.choice(art_ids)
        page_links.append((src, dst))

    for d in range(20):
        for candidate in rng.sample(art_ids, k=3):
            disambig.append((f"term {d}", candidate))

    def tsv(header, rows):
        body = "".join(f"{chr(9).join(str(c) for c in row)}\n" for row in rows)
        return io.BytesIO((header + "\n" + body).encode())

    return (
        tsv("page_id\tkind\ttitle\tdescription", pages),
        tsv("from_page_id\tto_page_id", redirects),
        tsv("member_page_id\tcategory_page_id", memberships),
        tsv("from_article_page_id\tto_article_page_id", [(s, d) for s, d in page_links if s != d]),
        tsv("term\tcandidate_page_id", disambig),
    )


def synth_bookmarks(rng: random.Random, graph, count: int) -> list[Bookmark]:
    labels = [graph.node_by_id(n).canonical_label for n in range(0, len(graph), 7)]
    epoch = datetime(2009, 1, 1, tzinfo=timezone.utc)
    out = []
    for i in range(count):
        tags = tuple(
            rng.choice(tag_variants(rng.choice(labels))) for _ in range(rng.randint(1, 4))
        )
        out.append(
            Bookmark(
                url=f"https://bench{i}.example/page",
                title=f"bench bookmark {i}",
                tags=tags,
                saved_at=epoch + timedelta(minutes=rng.randrange(200_000)),
                save_count=rng.randrange(0, 500),
            )
        )
    return out


def timed(label: str, fn, repeat: int = 1):
    t0 = time.perf_counter()
    result = None
    for _ in range(repeat):
        result = fn()
    dt = time.perf_counter() - t0
    print(f"{label:<34} {dt * 1000:9.1f} ms")
    return result, dt


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--articles", type=int, default=8000)
    parser.add_argument("--categories", type=int, default=1500)
    parser.add_argument("--links", type=int, default=40000)
    parser.add_argument("--bookmarks", type=int, default=5000)
    parser.add_argument("--queries", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    rng = random.Random(args.seed)

    print(
        f"corpus: {args.articles} articles, {args.categories} categories,"
        f" {args.links} links, {args.bookmarks} bookmarks\n"
    )
    streams = synth_dump(rng, args.articles, args.categories, args.links)
    bundle, _ = timed("parse_dump", lambda: parse_dump(*streams))
    (graph, report), _ = timed("build_from_bundle", lambda: build_from_bundle(bundle))
    print(f"{'':<34} nodes={report.node_count} merged={report.merged_count}"
          f" edges={report.broader_edge_count}")

    sink = io.BytesIO()
    size, _ = timed("save_graph", lambda: save_graph(graph, sink))
    print(f"{'':<34} store size {size / 1024:.0f} KiB")
    graph, _ = timed("load_graph", lambda: load_graph(io.BytesIO(sink.getvalue())))

    store = BookmarkStore(synth_bookmarks(rng, graph, args.bookmarks))

    node_pool = [rng.randrange(len(graph)) for _ in range(args.queries)]
    keyword_pool = [f"topic {rng.randrange(args.categories):05d}"[:9] for _ in range(args.queries)]

    per_op = []
    for label, fn in (
        ("tree_results", lambda: [tree_results(graph, n) for n in node_pool]),
        ("sidestep", lambda: [sidestep(graph, n) for n in node_pool]),
        ("disambiguate (prefix)", lambda: [disambiguate(graph, k) for k in keyword_pool]),
        ("link_results", lambda: [store.link_results(node_variants(graph, n)) for n in node_pool]),
    ):
        _, dt = timed(f"{label} x{args.queries}", fn)
        per_op.append(dt / args.queries * 1e6)

    print(f"\nper-query microseconds: median {statistics.median(per_op):.0f}"
          f" (min {min(per_op):.0f}, max {max(per_op):.0f})")


if __name__ == "__main__":
    main()
