"""Read-only HTTP JSON API over a concept graph and a bookmark corpus.

Endpoints mirror the in-process query functions one-to-one; the payload
builders live here so the CLI's --json output and the HTTP bodies come
from the same code.  Errors use a uniform envelope
``{"error": {"code", "message"}}`` and all handlers are read-only, so
concurrent requests are safe by construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .folksonomy import (
    DEFAULT_LINK_LIMIT,
    BookmarkStore,
    LinkResult,
    tag_variants,
)
from .graph import ConceptGraph, UnknownNodeError
from .query import (
    DEFAULT_CANDIDATE_LIMIT,
    DEFAULT_LEAF_LIMIT,
    DisambiguationCandidate,
    SidestepEntry,
    TermRef,
    TreeResults,
    disambiguate,
    sidestep,
    tree_results,
)

_INT_RE = re.compile(r"-?[0-9]+")


@dataclass
class ServiceData:
    """Everything the handlers read: one graph, one corpus."""

    graph: ConceptGraph
    store: BookmarkStore


def node_variants(graph: ConceptGraph, node_id: int) -> list[str]:
    """Tag spellings for a node: variants of its label and every alias."""
    node = graph.node_by_id(node_id)
    return tag_variants(node.canonical_label, node.aliases)


def rfc3339(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def candidate_payload(c: DisambiguationCandidate) -> dict:
    return {"node_id": c.node_id, "label": c.label, "description": c.description}


def term_ref_payload(ref: TermRef) -> dict:
    return {
        "node_id": ref.node_id,
        "label": ref.label,
        "is_branch": ref.is_branch,
        "inlink_count": ref.inlink_count,
    }


def term_payload(graph: ConceptGraph, node_id: int, results: TreeResults) -> dict:
    node = graph.node_by_id(node_id)
    return {
        "node_id": node.node_id,
        "canonical_label": node.canonical_label,
        "description": node.description or "",
        "aliases": sorted(node.aliases),
        "generalize": [term_ref_payload(r) for r in results.generalize],
        "branches": [term_ref_payload(r) for r in results.branches],
        "leaves": [term_ref_payload(r) for r in results.leaves],
        "leaves_total": results.leaves_total,
    }


def link_payload(r: LinkResult) -> dict:
    return {
        "url": r.url,
        "title": r.title,
        "summary_tags": list(r.summary_tags),
        "save_count": r.save_count,
        "saved_at": rfc3339(r.saved_at),
        "feed": r.feed.value,
    }


def sidestep_payload(node_id: int, entries: list[SidestepEntry]) -> dict:
    return {
        "node_id": node_id,
        "parents": [
            {
                "parent": term_ref_payload(e.parent),
                "leaves": [term_ref_payload(r) for r in e.leaves],
                "leaves_total": e.leaves_total,
            }
            for e in entries
        ],
    }


class _HttpError(Exception):
    def __init__(self, status: int, code: str, message: str):
        self.status = status
        self.code = code
        self.message = message


def _bad_param(code: str, message: str) -> _HttpError:
    return _HttpError(400, code, message)


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": {"code": code, "message": message}})


def _parse_int(raw: str, name: str) -> int:
    if not (raw.isascii() and _INT_RE.fullmatch(raw)):
        raise _bad_param("invalid_parameter", f"{name} must be an integer")
    return int(raw)


def _parse_limit(raw: str | None, name: str, default: int) -> int:
    if raw is None:
        return default
    value = _parse_int(raw, name)
    if value < 1:
        raise _bad_param("invalid_parameter", f"{name} must be positive")
    return value


def create_app(data: ServiceData | None = None) -> FastAPI:
    """Build the API app; pass data later via ``app.state.data`` if deferred."""
    app = FastAPI(title="treenav", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.data = data
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    @app.exception_handler(_HttpError)
    async def http_error(request: Request, exc: _HttpError):
        return _error(exc.status, exc.code, exc.message)

    @app.exception_handler(UnknownNodeError)
    async def unknown_node(request: Request, exc: UnknownNodeError):
        return _error(404, "unknown_node", str(exc))

    @app.exception_handler(Exception)
    async def internal(request: Request, exc: Exception):
        return _error(500, "internal_error", "internal invariant violation")

    def ready(request: Request) -> ServiceData:
        data = request.app.state.data
        if data is None:
            raise _HttpError(503, "not_ready", "data load has not completed")
        return data

    @app.get("/health")
    def health(request: Request):
        data = request.app.state.data
        if data is None:
            return _error(503, "not_ready", "data load has not completed")
        return {"status": "ok", "nodes": len(data.graph), "bookmarks": len(data.store)}

    @app.get("/api/search")
    def search(request: Request, q: str | None = None, limit: str | None = None):
        data = ready(request)
        if q is None or not q.strip():
            raise _bad_param("missing_parameter", "q is required and must be non-empty")
        n = _parse_limit(limit, "limit", DEFAULT_CANDIDATE_LIMIT)
        return [candidate_payload(c) for c in disambiguate(data.graph, q, n)]

    @app.get("/api/term/{node_id}")
    def term(request: Request, node_id: str, leaf_limit: str | None = None):
        data = ready(request)
        nid = _parse_int(node_id, "node_id")
        n = _parse_limit(leaf_limit, "leaf_limit", DEFAULT_LEAF_LIMIT)
        return term_payload(data.graph, nid, tree_results(data.graph, nid, n))

    @app.get("/api/term/{node_id}/links")
    def links(request: Request, node_id: str, limit: str | None = None):
        data = ready(request)
        nid = _parse_int(node_id, "node_id")
        n = _parse_limit(limit, "limit", DEFAULT_LINK_LIMIT)
        variants = node_variants(data.graph, nid)
        return [link_payload(r) for r in data.store.link_results(variants, n)]

    @app.get("/api/term/{node_id}/sidestep")
    def side(request: Request, node_id: str, leaf_limit: str | None = None):
        data = ready(request)
        nid = _parse_int(node_id, "node_id")
        n = _parse_limit(leaf_limit, "leaf_limit", DEFAULT_LEAF_LIMIT)
        return sidestep_payload(nid, sidestep(data.graph, nid, n))

    return app
