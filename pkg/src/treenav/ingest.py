"""Dump and corpus parsers, plus the binary on-disk graph store.

Five TSV files describe the raw page dump (pages, redirects, category links,
page links, disambiguation rows); a JSON Lines file holds the tagged-bookmark
corpus.  Parsing is strict: every input either yields a validated bundle or a
positioned error — no row is silently dropped or repaired.

The graph store is a single versioned binary file (magic ``TNAV``) holding
length-prefixed sections: nodes, edges, inlinks, indexes.  ``load_graph``
reproduces a graph observationally identical to the one saved.

File formats (UTF-8, LF line endings, one-line header on each TSV):

    pages.tsv           page_id <TAB> kind <TAB> title <TAB> description
    redirects.tsv       from_page_id <TAB> to_page_id
    category_links.tsv  member_page_id <TAB> category_page_id
    page_links.tsv      from_article_page_id <TAB> to_article_page_id
    disambig.tsv        term <TAB> candidate_page_id
    bookmarks.jsonl     {"url","title","tags","saved_at","save_count"} per line
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import BinaryIO
from urllib.parse import urlsplit

from .graph import ConceptGraph, ConceptNode, PageKind, TreenavError

STORE_MAGIC = b"TNAV"
STORE_VERSION = 1

_HEADERS = {
    "pages.tsv": "page_id\tkind\ttitle\tdescription",
    "redirects.tsv": "from_page_id\tto_page_id",
    "category_links.tsv": "member_page_id\tcategory_page_id",
    "page_links.tsv": "from_article_page_id\tto_article_page_id",
    "disambig.tsv": "term\tcandidate_page_id",
}


# -- errors -------------------------------------------------------------------


class FormatError(TreenavError):
    """Malformed row or record; carries the 1-based line/record number."""

    def __init__(self, line: int, reason: str, source: str = ""):
        self.line = line
        self.reason = reason
        self.source = source
        where = f"{source}:{line}" if source else f"line {line}"
        super().__init__(f"{where}: {reason}")


class DanglingReferenceError(TreenavError):
    """A link row references a page id with no page record."""

    def __init__(self, line: int, page_id: int, source: str = ""):
        self.line = line
        self.page_id = page_id
        self.source = source
        where = f"{source}:{line}" if source else f"line {line}"
        super().__init__(f"{where}: reference to unknown page id {page_id}")


class DuplicatePageIdError(TreenavError):
    def __init__(self, line: int, page_id: int, source: str = ""):
        self.line = line
        self.page_id = page_id
        self.source = source
        super().__init__(f"{source or 'pages'}:{line}: duplicate page id {page_id}")


class DuplicateUrlError(TreenavError):
    def __init__(self, record: int, url: str):
        self.record = record
        self.url = url
        super().__init__(f"record {record}: duplicate url {url}")


class CorruptStoreError(TreenavError):
    def __init__(self, offset: int, reason: str):
        self.offset = offset
        self.reason = reason
        super().__init__(f"corrupt graph store at byte {offset}: {reason}")


class VersionMismatchError(TreenavError):
    def __init__(self, found: int, expected: int):
        self.found = found
        self.expected = expected
        super().__init__(f"graph store version {found}, expected {expected}")


# -- domain records -----------------------------------------------------------


@dataclass(frozen=True)
class PageRecord:
    """One raw dump row: a page with a kind, title, optional description."""

    page_id: int
    kind: PageKind
    title: str
    description: str | None = None


@dataclass(frozen=True)
class RawLink:
    """A directed page-to-page row (redirect, membership, or page link)."""

    src: int
    dst: int


@dataclass(frozen=True)
class Bookmark:
    """A tagged URL.  Tags are stored normalized (trimmed, lowercased)."""

    url: str
    title: str
    tags: tuple[str, ...]
    saved_at: datetime
    save_count: int


@dataclass
class DumpBundle:
    """Everything parse_dump extracts, with all cross-references validated."""

    pages: dict[int, PageRecord]
    redirects: list[RawLink]
    memberships: list[RawLink]
    page_links: list[RawLink]
    disambig: list[tuple[str, int]] = field(default_factory=list)


# -- TSV machinery ------------------------------------------------------------


def _decode_utf8(data: bytes, source: str) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = data[: exc.start].count(b"\n") + 1
        raise FormatError(line, "invalid UTF-8", source) from exc


def _read_tsv(stream: BinaryIO, source: str, n_fields: int) -> list[tuple[int, list[str]]]:
    text = _decode_utf8(stream.read(), source)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError(1, "missing header", source)
    if lines[0] != _HEADERS[source]:
        raise FormatError(1, f"bad header; expected {_HEADERS[source]!r}", source)
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if line == "":
            raise FormatError(lineno, "blank line", source)
        if line.endswith("\r"):
            raise FormatError(lineno, "CRLF line ending; LF required", source)
        fields = line.split("\t")
        if len(fields) != n_fields:
            raise FormatError(
                lineno, f"expected {n_fields} tab-separated fields, got {len(fields)}", source
            )
        rows.append((lineno, fields))
    return rows


def _parse_page_id(text: str, lineno: int, source: str) -> int:
    if not (text.isascii() and text.isdigit()):
        raise FormatError(lineno, f"page id must be an unsigned integer, got {text!r}", source)
    return int(text)


def _require_page(pages: dict[int, PageRecord], pid: int, lineno: int, source: str) -> PageRecord:
    rec = pages.get(pid)
    if rec is None:
        raise DanglingReferenceError(lineno, pid, source)
    return rec


def _parse_pages(stream: BinaryIO) -> dict[int, PageRecord]:
    source = "pages.tsv"
    pages: dict[int, PageRecord] = {}
    for lineno, (pid_s, kind_s, title, desc) in _read_tsv(stream, source, 4):
        pid = _parse_page_id(pid_s, lineno, source)
        if pid in pages:
            raise DuplicatePageIdError(lineno, pid, source)
        try:
            kind = PageKind(kind_s)
        except ValueError:
            raise FormatError(lineno, f"unknown page kind {kind_s!r}", source) from None
        if not title.strip():
            raise FormatError(lineno, "empty title", source)
        if kind is PageKind.CATEGORY:
            if not title.startswith("Category:") or not title[len("Category:") :].strip():
                raise FormatError(lineno, "category title must be 'Category:<name>'", source)
        elif title.startswith("Category:"):
            raise FormatError(lineno, f"{kind.value} title carries a Category: prefix", source)
        pages[pid] = PageRecord(pid, kind, title, desc if desc else None)
    return pages


def parse_dump(
    pages_file: BinaryIO,
    redirects_file: BinaryIO,
    category_links_file: BinaryIO,
    page_links_file: BinaryIO,
    disambig_file: BinaryIO,
) -> DumpBundle:
    """Parse the five dump files into a cross-validated bundle.

    Raises FormatError / DanglingReferenceError / DuplicatePageIdError with
    the offending file and line.  Every id in every link row is guaranteed to
    resolve to a PageRecord of the kind the file calls for.
    """
    pages = _parse_pages(pages_file)

    source = "redirects.tsv"
    redirects: list[RawLink] = []
    redirect_sources: set[int] = set()
    for lineno, (src_s, dst_s) in _read_tsv(redirects_file, source, 2):
        src = _parse_page_id(src_s, lineno, source)
        dst = _parse_page_id(dst_s, lineno, source)
        if src == dst:
            raise FormatError(lineno, f"self-redirect on page {src}", source)
        if _require_page(pages, src, lineno, source).kind is not PageKind.REDIRECT:
            raise FormatError(lineno, f"source page {src} is not a redirect", source)
        _require_page(pages, dst, lineno, source)
        if src in redirect_sources:
            raise FormatError(lineno, f"duplicate redirect source {src}", source)
        redirect_sources.add(src)
        redirects.append(RawLink(src, dst))

    source = "category_links.tsv"
    memberships: list[RawLink] = []
    for lineno, (member_s, cat_s) in _read_tsv(category_links_file, source, 2):
        member = _parse_page_id(member_s, lineno, source)
        cat = _parse_page_id(cat_s, lineno, source)
        member_rec = _require_page(pages, member, lineno, source)
        cat_rec = _require_page(pages, cat, lineno, source)
        if cat_rec.kind is not PageKind.CATEGORY:
            raise FormatError(lineno, f"membership target {cat} is not a category page", source)
        if member_rec.kind not in (PageKind.ARTICLE, PageKind.CATEGORY):
            raise FormatError(
                lineno, f"member {member} must be an article or category page", source
            )
        memberships.append(RawLink(member, cat))

    source = "page_links.tsv"
    page_links: list[RawLink] = []
    for lineno, (src_s, dst_s) in _read_tsv(page_links_file, source, 2):
        src = _parse_page_id(src_s, lineno, source)
        dst = _parse_page_id(dst_s, lineno, source)
        if _require_page(pages, src, lineno, source).kind is not PageKind.ARTICLE:
            raise FormatError(lineno, f"link source {src} is not an article page", source)
        if _require_page(pages, dst, lineno, source).kind is not PageKind.ARTICLE:
            raise FormatError(lineno, f"link target {dst} is not an article page", source)
        page_links.append(RawLink(src, dst))

    source = "disambig.tsv"
    disambig: list[tuple[str, int]] = []
    for lineno, (term, cand_s) in _read_tsv(disambig_file, source, 2):
        if not term.strip():
            raise FormatError(lineno, "empty term", source)
        cand = _parse_page_id(cand_s, lineno, source)
        if _require_page(pages, cand, lineno, source).kind not in (
            PageKind.ARTICLE,
            PageKind.CATEGORY,
        ):
            raise FormatError(
                lineno, f"candidate {cand} must be an article or category page", source
            )
        disambig.append((term, cand))

    return DumpBundle(pages, redirects, memberships, page_links, disambig)


# -- bookmark corpus ----------------------------------------------------------

_BOOKMARK_FIELDS = {"url", "title", "tags", "saved_at", "save_count"}
_BOOKMARKS_SOURCE = "bookmarks.jsonl"


def normalize_tag(tag: str) -> str:
    """Tag form used for all matching and counting: trimmed and lowercased."""
    return tag.strip().lower()


def _parse_timestamp(value: object, record: int) -> datetime:
    if not isinstance(value, str):
        raise FormatError(record, "saved_at must be a string", _BOOKMARKS_SOURCE)
    text = value
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(text)
    except ValueError:
        raise FormatError(
            record, f"saved_at is not an RFC 3339 timestamp: {value!r}", _BOOKMARKS_SOURCE
        ) from None
    if ts.tzinfo is None or ts.utcoffset() != timezone.utc.utcoffset(None):
        raise FormatError(record, "saved_at must carry a UTC offset", _BOOKMARKS_SOURCE)
    if ts.microsecond:
        raise FormatError(record, "saved_at must have seconds precision", _BOOKMARKS_SOURCE)
    return ts.astimezone(timezone.utc)


def parse_bookmarks(stream: BinaryIO) -> list[Bookmark]:
    """Parse a JSON Lines bookmark corpus, order preserved.

    Rejects duplicate URLs, unknown or missing fields, negative save counts,
    non-UTC timestamps, and tags that are empty after normalization.
    """
    text = _decode_utf8(stream.read(), _BOOKMARKS_SOURCE)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()

    bookmarks: list[Bookmark] = []
    seen_urls: set[str] = set()
    for record, line in enumerate(lines, start=1):
        if not line.strip():
            raise FormatError(record, "blank line", _BOOKMARKS_SOURCE)
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(record, f"invalid JSON: {exc.msg}", _BOOKMARKS_SOURCE) from None
        if not isinstance(obj, dict):
            raise FormatError(record, "record is not a JSON object", _BOOKMARKS_SOURCE)
        missing = _BOOKMARK_FIELDS - obj.keys()
        if missing:
            raise FormatError(record, f"missing field {sorted(missing)[0]!r}", _BOOKMARKS_SOURCE)
        unknown = obj.keys() - _BOOKMARK_FIELDS
        if unknown:
            raise FormatError(record, f"unknown field {sorted(unknown)[0]!r}", _BOOKMARKS_SOURCE)

        url = obj["url"]
        if not isinstance(url, str):
            raise FormatError(record, "url must be a string", _BOOKMARKS_SOURCE)
        parts = urlsplit(url)
        if not parts.scheme or not parts.netloc:
            raise FormatError(record, f"url is not absolute: {url!r}", _BOOKMARKS_SOURCE)
        if url in seen_urls:
            raise DuplicateUrlError(record, url)

        title = obj["title"]
        if not isinstance(title, str):
            raise FormatError(record, "title must be a string", _BOOKMARKS_SOURCE)

        raw_tags = obj["tags"]
        if not isinstance(raw_tags, list) or not raw_tags:
            raise FormatError(record, "tags must be a non-empty list", _BOOKMARKS_SOURCE)
        tags = []
        for raw in raw_tags:
            if not isinstance(raw, str):
                raise FormatError(record, "tags must be strings", _BOOKMARKS_SOURCE)
            tag = normalize_tag(raw)
            if not tag:
                raise FormatError(record, "tag empty after normalization", _BOOKMARKS_SOURCE)
            tags.append(tag)

        count = obj["save_count"]
        if isinstance(count, bool) or not isinstance(count, int) or count < 0:
            raise FormatError(
                record, "save_count must be a non-negative integer", _BOOKMARKS_SOURCE
            )

        saved_at = _parse_timestamp(obj["saved_at"], record)
        seen_urls.add(url)
        bookmarks.append(Bookmark(url, title, tuple(tags), saved_at, count))
    return bookmarks


# -- binary graph store -------------------------------------------------------


class _Writer:
    def __init__(self) -> None:
        self.buf = bytearray()

    def u8(self, v: int) -> None:
        self.buf += struct.pack(">B", v)

    def u32(self, v: int) -> None:
        self.buf += struct.pack(">I", v)

    def u64(self, v: int) -> None:
        self.buf += struct.pack(">Q", v)

    def text(self, s: str) -> None:
        raw = s.encode("utf-8")
        self.u32(len(raw))
        self.buf += raw

    def ids(self, values) -> None:
        self.u32(len(values))
        for v in values:
            self.u32(v)


class _Reader:
    def __init__(self, data: bytes, base_offset: int = 0):
        self.data = data
        self.pos = 0
        self.base = base_offset

    @property
    def offset(self) -> int:
        return self.base + self.pos

    def take(self, n: int, what: str) -> bytes:
        if self.pos + n > len(self.data):
            raise CorruptStoreError(self.offset, f"truncated while reading {what}")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u8(self, what: str) -> int:
        return self.take(1, what)[0]

    def u32(self, what: str) -> int:
        return struct.unpack(">I", self.take(4, what))[0]

    def u64(self, what: str) -> int:
        return struct.unpack(">Q", self.take(8, what))[0]

    def text(self, what: str) -> str:
        n = self.u32(what)
        start = self.offset
        raw = self.take(n, what)
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError:
            raise CorruptStoreError(start, f"invalid UTF-8 in {what}") from None

    def ids(self, what: str) -> tuple[int, ...]:
        n = self.u32(what)
        return tuple(self.u32(what) for _ in range(n))

    def done(self) -> bool:
        return self.pos == len(self.data)


def _encode_nodes(graph: ConceptGraph) -> bytes:
    w = _Writer()
    w.u32(graph.node_count)
    for node in graph.iter_nodes():
        w.u32(node.node_id)
        w.text(node.canonical_label)
        for facet in (node.article, node.category):
            w.u8(1 if facet is not None else 0)
            w.u32(facet if facet is not None else 0)
        aliases = sorted(node.aliases)
        w.u32(len(aliases))
        for alias in aliases:
            w.text(alias)
        w.u8(1 if node.description is not None else 0)
        w.text(node.description or "")
    return bytes(w.buf)


def _encode_edges(graph: ConceptGraph) -> bytes:
    w = _Writer()
    for nid in range(graph.node_count):
        w.ids(graph.broader_of(nid))
    w.ids(graph.self_loop_nodes)
    return bytes(w.buf)


def _encode_inlinks(graph: ConceptGraph) -> bytes:
    w = _Writer()
    w.u32(graph.node_count)
    for nid in range(graph.node_count):
        w.u32(graph.inlinks_of(nid))
    return bytes(w.buf)


def _encode_indexes(graph: ConceptGraph) -> bytes:
    w = _Writer()
    for index in (graph.label_index, graph.disambig_index):
        w.u32(len(index))
        for key, ids in index.items():
            w.text(key)
            w.ids(ids)
    return bytes(w.buf)


def save_graph(graph: ConceptGraph, sink: BinaryIO) -> int:
    """Serialize a frozen graph; returns the number of bytes written."""
    sections = [
        _encode_nodes(graph),
        _encode_edges(graph),
        _encode_inlinks(graph),
        _encode_indexes(graph),
    ]
    blob = bytearray()
    blob += STORE_MAGIC
    blob += struct.pack(">I", STORE_VERSION)
    for payload in sections:
        blob += struct.pack(">Q", len(payload))
        blob += payload
    sink.write(bytes(blob))
    return len(blob)


def _check_node_id(nid: int, count: int, offset: int, what: str) -> int:
    if nid >= count:
        raise CorruptStoreError(offset, f"{what} references node {nid} of {count}")
    return nid


def load_graph(source: BinaryIO) -> ConceptGraph:
    """Load a graph produced by save_graph; observationally identical to it."""
    data = source.read()
    head = _Reader(data)
    if head.take(4, "magic") != STORE_MAGIC:
        raise CorruptStoreError(0, "bad magic bytes")
    version = head.u32("version")
    if version != STORE_VERSION:
        raise VersionMismatchError(version, STORE_VERSION)

    readers = []
    for name in ("nodes", "edges", "inlinks", "indexes"):
        length = head.u64(f"{name} section length")
        start = head.offset
        payload = head.take(length, f"{name} section")
        readers.append(_Reader(payload, start))
    if not head.done():
        raise CorruptStoreError(head.offset, "trailing bytes after last section")

    nodes_r, edges_r, inlinks_r, indexes_r = readers

    count = nodes_r.u32("node count")
    nodes: list[ConceptNode] = []
    for i in range(count):
        nid = nodes_r.u32("node id")
        if nid != i:
            raise CorruptStoreError(nodes_r.offset, f"node ids not dense: expected {i}, got {nid}")
        label = nodes_r.text("node label")
        facets: list[int | None] = []
        for what in ("article facet", "category facet"):
            present = nodes_r.u8(what)
            value = nodes_r.u32(what)
            facets.append(value if present else None)
        n_aliases = nodes_r.u32("alias count")
        aliases = frozenset(nodes_r.text("alias") for _ in range(n_aliases))
        has_desc = nodes_r.u8("description flag")
        desc = nodes_r.text("description")
        try:
            nodes.append(
                ConceptNode(nid, label, facets[0], facets[1], aliases, desc if has_desc else None)
            )
        except ValueError as exc:
            raise CorruptStoreError(nodes_r.offset, str(exc)) from None
    if not nodes_r.done():
        raise CorruptStoreError(nodes_r.offset, "trailing bytes in nodes section")

    broader = []
    for nid in range(count):
        at = edges_r.offset
        ids = edges_r.ids("broader edges")
        broader.append(tuple(_check_node_id(v, count, at, "broader edge") for v in ids))
    at = edges_r.offset
    self_loops = tuple(_check_node_id(v, count, at, "self loop") for v in edges_r.ids("self loops"))
    if not edges_r.done():
        raise CorruptStoreError(edges_r.offset, "trailing bytes in edges section")

    if inlinks_r.u32("inlink count") != count:
        raise CorruptStoreError(inlinks_r.offset, "inlink count mismatch")
    inlinks = [inlinks_r.u32("inlink value") for _ in range(count)]
    if not inlinks_r.done():
        raise CorruptStoreError(inlinks_r.offset, "trailing bytes in inlinks section")

    indexes: list[dict[str, tuple[int, ...]]] = []
    for what in ("label index", "disambig index"):
        entries = indexes_r.u32(f"{what} size")
        index: dict[str, tuple[int, ...]] = {}
        for _ in range(entries):
            key = indexes_r.text(f"{what} key")
            at = indexes_r.offset
            index[key] = tuple(
                _check_node_id(v, count, at, what) for v in indexes_r.ids(f"{what} ids")
            )
        indexes.append(index)
    if not indexes_r.done():
        raise CorruptStoreError(indexes_r.offset, "trailing bytes in indexes section")

    # Narrower lists are the exact inverse of broader, split by the child's facets.
    branches: list[list[int]] = [[] for _ in range(count)]
    leaves: list[list[int]] = [[] for _ in range(count)]
    for nid in range(count):
        for parent in broader[nid]:
            if nodes[nid].category is not None:
                branches[parent].append(nid)
            else:
                leaves[parent].append(nid)

    return ConceptGraph(
        nodes,
        broader,
        [tuple(sorted(b)) for b in branches],
        [tuple(sorted(l)) for l in leaves],
        inlinks,
        indexes[0],
        indexes[1],
        self_loops,
    )
