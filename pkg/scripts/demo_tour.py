#!/usr/bin/env python3
"""Guided tour over the bundled fixture data, exercising the real CLI.

Builds the graph store from fixtures/, then replays the navigation story:
an ambiguous keyword, an exact hit that opens a full results page, a jump
by node id, and the JSON view the web UI consumes.
"""

import argparse
import contextlib
import io
import json
import shlex
import sys
import tempfile
from pathlib import Path

from treenav.cli import main as cli
from treenav.ingest import load_graph
from treenav.query import disambiguate


def banner(text: str) -> None:
    print()
    print("=" * 72)
    print(f"== {text}")
    print("=" * 72)


def run(argv: list[str]) -> None:
    print(f"$ treenav {shlex.join(argv)}")
    rc = cli(argv)
    if rc != 0:
        sys.exit(f"demo step failed with exit code {rc}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--fixtures",
        default=Path(__file__).resolve().parent.parent / "fixtures",
        type=Path,
        help="directory with the five dump files and bookmarks.jsonl",
    )
    args = parser.parse_args()
    fixtures: Path = args.fixtures

    with tempfile.TemporaryDirectory() as scratch:
        store = str(Path(scratch) / "fixture.tnav")

        banner("1. ingest: five dump files -> one binary graph store")
        run(
            [
                "ingest",
                "--pages", str(fixtures / "pages.tsv"),
                "--redirects", str(fixtures / "redirects.tsv"),
                "--category-links", str(fixtures / "category_links.tsv"),
                "--page-links", str(fixtures / "page_links.tsv"),
                "--disambig", str(fixtures / "disambig.tsv"),
                "--out", store,
            ]
        )

        data = ["--graph", store, "--bookmarks", str(fixtures / "bookmarks.jsonl")]

        banner("2. an ambiguous keyword offers a choice")
        run(["query", "acm", *data])

        banner("3. an exact keyword opens its results page directly")
        run(["query", "ruby on rails", *data])

        banner("4. jumping straight to a node id")
        with open(store, "rb") as fh:
            graph = load_graph(fh)
        (web20,) = [c.node_id for c in disambiguate(graph, "web 2.0")]
        run(["query", "--id", str(web20), *data])

        banner("5. the same page as JSON (what the web UI consumes)")
        print(f"$ treenav query --json --id {web20} ... | head")
        buffer = io.StringIO()
        with contextlib.redirect_stdout(buffer):
            cli(["query", "--json", "--id", str(web20), *data])
        body = json.loads(buffer.getvalue())
        preview = {
            "term": {k: body["term"][k] for k in ("node_id", "canonical_label", "leaves_total")},
            "links": f"[{len(body['links'])} link results]",
        }
        print(json.dumps(preview, indent=2))

        print()
        print("Tour complete. Try `treenav serve` with the same flags for the HTTP API.")


if __name__ == "__main__":
    main()
