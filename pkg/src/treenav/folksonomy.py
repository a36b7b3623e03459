"""Tagged-bookmark corpus: per-tag popular/recent feeds and tag summaries.

The store answers three questions about a set of tag spellings: which
bookmarks carry them (ordered by save count or by recency), what a short
tag summary for each hit looks like, and which other tags co-occur with
them.  "Popular" is defined transparently as save_count >= threshold.
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Iterable, Sequence

from .ingest import Bookmark, DuplicateUrlError

DEFAULT_POPULAR_THRESHOLD = 100
DEFAULT_LINK_LIMIT = 10
SUMMARY_TAG_CAP = 5


class FeedKind(Enum):
    """Which ranking produced a link result."""

    POPULAR = "popular"
    RECENT = "recent"


@dataclass(frozen=True)
class LinkResult:
    """One bookmark as presented on a results page."""

    url: str
    title: str
    summary_tags: tuple[str, ...]
    save_count: int
    saved_at: datetime
    feed: FeedKind


def tag_variants(label: str, aliases: Iterable[str] = ()) -> list[str]:
    """Tag spellings a concept label may appear under in the corpus.

    Each of the label and its aliases is lowercased and yields three
    variants: whitespace removed, whitespace runs replaced by a hyphen,
    and replaced by an underscore.  Label-derived variants come first,
    then each alias in sorted order; duplicates keep their first slot.
    """
    variants: list[str] = []
    seen: set[str] = set()
    for source in (label, *sorted(aliases)):
        parts = source.lower().split()
        if not parts:
            continue
        for sep in ("", "-", "_"):
            candidate = sep.join(parts)
            if candidate not in seen:
                seen.add(candidate)
                variants.append(candidate)
    return variants


def _popular_key(bm: Bookmark):
    return (-bm.save_count, -bm.saved_at.timestamp(), bm.url)


def _recent_key(bm: Bookmark):
    return (-bm.saved_at.timestamp(), bm.url)


class _Snapshot:
    """Immutable corpus view with the indexes queries need."""

    __slots__ = ("bookmarks", "by_tag", "tag_freq", "urls")

    def __init__(self, bookmarks: tuple[Bookmark, ...]):
        self.bookmarks = bookmarks
        by_tag: dict[str, list[int]] = {}
        freq: Counter[str] = Counter()
        urls: set[str] = set()
        for i, bm in enumerate(bookmarks):
            urls.add(bm.url)
            for tag in set(bm.tags):
                by_tag.setdefault(tag, []).append(i)
                freq[tag] += 1
        self.by_tag = by_tag
        self.tag_freq = freq
        self.urls = urls


class BookmarkStore:
    """Read-mostly bookmark corpus with snapshot-consistent queries.

    Every query reads one immutable snapshot, so concurrent readers never
    observe a half-applied append.  append() serializes writers under a
    lock and swaps in a rebuilt snapshot.
    """

    def __init__(
        self,
        bookmarks: Iterable[Bookmark] = (),
        *,
        popular_threshold: int = DEFAULT_POPULAR_THRESHOLD,
    ):
        if popular_threshold < 0:
            raise ValueError("popular_threshold must be non-negative")
        corpus = tuple(bookmarks)
        seen: set[str] = set()
        for i, bm in enumerate(corpus):
            if bm.url in seen:
                raise DuplicateUrlError(i + 1, bm.url)
            seen.add(bm.url)
        self.popular_threshold = popular_threshold
        self._lock = threading.Lock()
        self._snapshot = _Snapshot(corpus)

    def __len__(self) -> int:
        return len(self._snapshot.bookmarks)

    @property
    def bookmarks(self) -> tuple[Bookmark, ...]:
        return self._snapshot.bookmarks

    def append(self, bookmark: Bookmark) -> None:
        """Add one bookmark; readers keep seeing the old snapshot until the swap."""
        with self._lock:
            snap = self._snapshot
            if bookmark.url in snap.urls:
                raise DuplicateUrlError(len(snap.bookmarks) + 1, bookmark.url)
            self._snapshot = _Snapshot(snap.bookmarks + (bookmark,))

    def _matching(self, snap: _Snapshot, variants: Sequence[str]) -> list[Bookmark]:
        hit: set[int] = set()
        for v in variants:
            hit.update(snap.by_tag.get(v, ()))
        return [snap.bookmarks[i] for i in sorted(hit)]

    def _result(
        self, snap: _Snapshot, bm: Bookmark, variants: Sequence[str], feed: FeedKind
    ) -> LinkResult:
        exclude = set(variants)
        own = sorted(set(bm.tags) - exclude, key=lambda t: (-snap.tag_freq[t], t))
        return LinkResult(
            url=bm.url,
            title=bm.title,
            summary_tags=tuple(own[:SUMMARY_TAG_CAP]),
            save_count=bm.save_count,
            saved_at=bm.saved_at,
            feed=feed,
        )

    def feed(
        self, variants: Sequence[str], kind: FeedKind, limit: int = DEFAULT_LINK_LIMIT
    ) -> list[LinkResult]:
        """Bookmarks matching any variant, ranked per feed kind.

        POPULAR keeps only bookmarks at or above the popularity threshold,
        ordered by save count descending then recency; RECENT orders every
        match by recency then url.
        """
        if limit < 1:
            raise ValueError("limit must be positive")
        snap = self._snapshot
        matched = self._matching(snap, variants)
        if kind is FeedKind.POPULAR:
            matched = [b for b in matched if b.save_count >= self.popular_threshold]
            matched.sort(key=_popular_key)
        else:
            matched.sort(key=_recent_key)
        return [self._result(snap, b, variants, kind) for b in matched[:limit]]

    def link_results(
        self, variants: Sequence[str], limit: int = DEFAULT_LINK_LIMIT
    ) -> list[LinkResult]:
        """Popular hits first, padded with recent ones the popular list missed."""
        if limit < 1:
            raise ValueError("limit must be positive")
        snap = self._snapshot
        matched = self._matching(snap, variants)
        popular = sorted(
            (b for b in matched if b.save_count >= self.popular_threshold),
            key=_popular_key,
        )[:limit]
        taken = {b.url for b in popular}
        recent = sorted(
            (b for b in matched if b.url not in taken), key=_recent_key
        )[: limit - len(popular)]
        results = [self._result(snap, b, variants, FeedKind.POPULAR) for b in popular]
        results += [self._result(snap, b, variants, FeedKind.RECENT) for b in recent]
        return results

    def cooccurring_tags(
        self, variants: Sequence[str], limit: int = DEFAULT_LINK_LIMIT
    ) -> list[tuple[str, int]]:
        """Tags sharing a bookmark with any variant, most frequent first.

        Counts are per bookmark (a tag repeated on one bookmark counts once);
        the query variants themselves are excluded.
        """
        if limit < 1:
            raise ValueError("limit must be positive")
        snap = self._snapshot
        exclude = set(variants)
        counts: Counter[str] = Counter()
        for bm in self._matching(snap, variants):
            for tag in set(bm.tags):
                if tag not in exclude:
                    counts[tag] += 1
        return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:limit]
