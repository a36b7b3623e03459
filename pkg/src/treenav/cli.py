"""Operator entry points: build the graph store, run queries, serve the API.

Exit codes are a stable contract: 0 success, 1 data error (bad dump
content, corrupt store, redirect cycles, occupied port), 2 usage error
(unknown flags, missing files).  The listed service flags fall back to
``TREENAV_``-prefixed environment variables; an explicit flag always wins.
"""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys
from typing import Callable, TypeVar

from .folksonomy import DEFAULT_POPULAR_THRESHOLD, BookmarkStore, LinkResult
from .graph import ConceptGraph, TreenavError
from .ingest import load_graph, parse_bookmarks, parse_dump, save_graph
from .merge import build_from_bundle
from .query import DisambiguationCandidate, TreeResults, disambiguate, tree_results
from .service import (
    ServiceData,
    candidate_payload,
    create_app,
    link_payload,
    node_variants,
    term_payload,
)

T = TypeVar("T")


class _UsageError(Exception):
    """Bad invocation (missing input, malformed env var): exit code 2."""


def _env(name: str) -> str | None:
    raw = os.environ.get(f"TREENAV_{name}")
    if raw is None or not raw.strip():
        return None
    return raw.strip()


def _resolve(flag_value: T | None, env_name: str, default: T | None, cast: Callable[[str], T]) -> T | None:
    """Flag beats environment beats default."""
    if flag_value is not None:
        return flag_value
    raw = _env(env_name)
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise _UsageError(f"TREENAV_{env_name} has invalid value {raw!r}")


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _require_file(path: str | None, flag: str, env_name: str | None = None) -> str | None:
    """Validate a path flag; on failure print a usage error naming the flag."""
    if path is None:
        hint = f" (or set TREENAV_{env_name})" if env_name else ""
        print(f"error: {flag} is required{hint}", file=sys.stderr)
        return None
    if not os.path.isfile(path):
        print(f"error: {flag}: no such file: {path}", file=sys.stderr)
        return None
    return path


def _load_data(graph_path: str, bookmarks_path: str, threshold: int) -> ServiceData:
    with open(graph_path, "rb") as fh:
        graph = load_graph(fh)
    with open(bookmarks_path, "rb") as fh:
        bookmarks = parse_bookmarks(fh)
    return ServiceData(graph=graph, store=BookmarkStore(bookmarks, popular_threshold=threshold))


def _cmd_ingest(args: argparse.Namespace) -> int:
    inputs = [
        ("--pages", args.pages),
        ("--redirects", args.redirects),
        ("--category-links", args.category_links),
        ("--page-links", args.page_links),
        ("--disambig", args.disambig),
    ]
    for flag, path in inputs:
        if _require_file(path, flag) is None:
            return 2

    opened = [open(path, "rb") for _, path in inputs]
    try:
        bundle = parse_dump(*opened)
    finally:
        for fh in opened:
            fh.close()
    graph, report = build_from_bundle(bundle)

    try:
        out = open(args.out, "wb")
    except OSError as exc:
        return _usage_error(f"--out: cannot write {args.out}: {exc}")
    with out:
        size = save_graph(graph, out)

    print(f"pages: {sum(report.page_counts.values())}")
    print(f"nodes: {report.node_count}")
    print(f"merged: {report.merged_count}")
    print(f"broader edges: {report.broader_edge_count}")
    print(f"cycles: {len(report.cycles)}")
    for cycle in report.cycles:
        print(f"  cycle: {' -> '.join(str(n) for n in cycle)}")
    if report.skipped_redirects:
        print(f"skipped redirects: {len(report.skipped_redirects)}")
    print(f"wrote {args.out} ({size} bytes)")
    return 0


def _format_term_text(
    graph: ConceptGraph, node_id: int, results: TreeResults, links: list[LinkResult]
) -> str:
    node = graph.node_by_id(node_id)
    lines = [f"{node.canonical_label}  (node {node.node_id})"]
    if node.description:
        lines.append(f"  {node.description}")
    if node.aliases:
        lines.append(f"  aka: {', '.join(sorted(node.aliases))}")

    def section(title: str, labels: list[str]) -> None:
        lines.append("")
        lines.append(title)
        if labels:
            lines.extend(f"  {label}" for label in labels)
        else:
            lines.append("  (none)")

    section("Generalize", [r.label for r in results.generalize])
    section("Specify (branches)", [r.label for r in results.branches])
    section("Specify (leaves)", [r.label for r in results.leaves])
    hidden = results.leaves_total - len(results.leaves)
    if hidden > 0:
        lines.append(f"  ... and {hidden} more")

    lines.append("")
    lines.append("Link results")
    if not links:
        lines.append("  (none)")
    for link in links:
        lines.append(f"  {link.title}  [{link.feed.value}, {link.save_count} saves]")
        lines.append(f"    {link.url}")
        if link.summary_tags:
            lines.append(f"    tags: {', '.join(link.summary_tags)}")
    return "\n".join(lines)


def _print_term(args: argparse.Namespace, data: ServiceData, node_id: int) -> None:
    results = tree_results(data.graph, node_id)
    links = data.store.link_results(node_variants(data.graph, node_id))
    if args.json:
        body = {
            "term": term_payload(data.graph, node_id, results),
            "links": [link_payload(r) for r in links],
        }
        print(json.dumps(body, indent=2, sort_keys=False))
    else:
        print(_format_term_text(data.graph, node_id, results, links))


def _print_candidates(args: argparse.Namespace, term: str, candidates: list[DisambiguationCandidate]) -> None:
    if args.json:
        print(json.dumps({"candidates": [candidate_payload(c) for c in candidates]}, indent=2))
        return
    if not candidates:
        print(f"no results for {term!r}")
        return
    print(f"{len(candidates)} candidates for {term!r}:")
    for c in candidates:
        suffix = f"  {c.description}" if c.description else ""
        print(f"  [{c.node_id}] {c.label}{suffix}")
    print("re-run with --id <n> to open one")


def _cmd_query(args: argparse.Namespace) -> int:
    graph_path = _require_file(
        _resolve(args.graph, "GRAPH", None, str), "--graph", "GRAPH"
    )
    bookmarks_path = _require_file(
        _resolve(args.bookmarks, "BOOKMARKS", None, str), "--bookmarks", "BOOKMARKS"
    )
    if graph_path is None or bookmarks_path is None:
        return 2
    if args.term is None and args.id is None:
        return _usage_error("a search term or --id is required")

    threshold = _resolve(
        args.popular_threshold, "POPULAR_THRESHOLD", DEFAULT_POPULAR_THRESHOLD, int
    )
    data = _load_data(graph_path, bookmarks_path, threshold)

    if args.id is not None:
        _print_term(args, data, args.id)
        return 0
    candidates = disambiguate(data.graph, args.term)
    if len(candidates) == 1:
        _print_term(args, data, candidates[0].node_id)
    else:
        _print_candidates(args, args.term, candidates)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    graph_path = _require_file(
        _resolve(args.graph, "GRAPH", None, str), "--graph", "GRAPH"
    )
    bookmarks_path = _require_file(
        _resolve(args.bookmarks, "BOOKMARKS", None, str), "--bookmarks", "BOOKMARKS"
    )
    if graph_path is None or bookmarks_path is None:
        return 2

    port = _resolve(args.port, "PORT", 8080, int)
    host = _resolve(args.host, "HOST", "127.0.0.1", str)
    threshold = _resolve(
        args.popular_threshold, "POPULAR_THRESHOLD", DEFAULT_POPULAR_THRESHOLD, int
    )

    data = _load_data(graph_path, bookmarks_path, threshold)
    app = create_app(data)

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, port))
    except OSError as exc:
        sock.close()
        print(f"error: cannot bind {host}:{port}: {exc}", file=sys.stderr)
        return 1
    sock.listen(128)

    import uvicorn

    print(f"serving on http://{host}:{port} (nodes: {len(data.graph)}, bookmarks: {len(data.store)})")
    config = uvicorn.Config(app, log_level="warning")
    server = uvicorn.Server(config)
    server.run(sockets=[sock])
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treenav",
        description="Navigate tagged bookmarks through a concept hierarchy.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="build a graph store from dump files")
    ingest.add_argument("--pages", required=True, help="pages.tsv")
    ingest.add_argument("--redirects", required=True, help="redirects.tsv")
    ingest.add_argument("--category-links", required=True, help="category_links.tsv")
    ingest.add_argument("--page-links", required=True, help="page_links.tsv")
    ingest.add_argument("--disambig", required=True, help="disambig.tsv")
    ingest.add_argument("--out", required=True, help="output graph store path")
    ingest.set_defaults(func=_cmd_ingest)

    query = sub.add_parser("query", help="look up a term and print its results page")
    query.add_argument("term", nargs="?", help="keyword to disambiguate")
    query.add_argument("--id", type=int, help="open a node id directly")
    query.add_argument("--graph", help="graph store path (env TREENAV_GRAPH)")
    query.add_argument("--bookmarks", help="bookmarks.jsonl path (env TREENAV_BOOKMARKS)")
    query.add_argument(
        "--popular-threshold",
        type=int,
        help=f"save_count for a popular bookmark (default {DEFAULT_POPULAR_THRESHOLD})",
    )
    query.add_argument("--json", action="store_true", help="emit API-shaped JSON")
    query.set_defaults(func=_cmd_query)

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--graph", help="graph store path (env TREENAV_GRAPH)")
    serve.add_argument("--bookmarks", help="bookmarks.jsonl path (env TREENAV_BOOKMARKS)")
    serve.add_argument("--port", type=int, help="listen port (default 8080, env TREENAV_PORT)")
    serve.add_argument("--host", help="bind address (default 127.0.0.1, env TREENAV_HOST)")
    serve.add_argument(
        "--popular-threshold",
        type=int,
        help=f"save_count for a popular bookmark (default {DEFAULT_POPULAR_THRESHOLD})",
    )
    serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        return _usage_error(str(exc))
    except TreenavError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
