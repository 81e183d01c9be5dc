"""Read-only HTTP API over a frozen snapshot.

Handlers are stateless and the store immutable, so any request parallelism is
safe. Error bodies are always ``{"error": "..."}`` with 400 for malformed
input and 404 for unknown ids.
"""

from __future__ import annotations

import re

from fastapi import FastAPI, HTTPException
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .catalog import CUI_RE
from .store import Store, record_to_dict

INTERACTION_ID_RE = re.compile(r"^(C[0-9]+)-(C[0-9]+)$")

PER_PAGE_DEFAULT = 10
PER_PAGE_MAX = 100


def search_agents(store: Store, q: str, limit: int = 20) -> list[dict]:
    """Catalog matches for a user query, one entry per canonical entity."""
    matches = store.catalog.resolve_query_name(q)
    best: dict[str, tuple] = {}
    for m in matches:
        canon = store.catalog.canonical_cui(m.entity.cui)
        if canon not in best:
            best[canon] = m
    entries = []
    for canon, m in best.items():
        ent = store.catalog.entities[canon]
        entries.append(
            {
                "cui": canon,
                "name": ent.name,
                "kind": ent.kind,
                "matched_via": m.match_kind,
                "interactions_count": store.interactions_count(canon),
                "_exact": m.score >= 1.0,
            }
        )
    entries.sort(
        key=lambda e: (
            not e["_exact"],
            -e["interactions_count"],
            e["name"].lower(),
            e["cui"],
        )
    )
    for e in entries:
        del e["_exact"]
    return entries[: max(limit, 0)]


def agent_detail(store: Store, cui: str) -> dict | None:
    """Canonical entity detail with its interaction list, or None if unknown."""
    if cui not in store.catalog.entities:
        return None
    canon = store.catalog.canonical_cui(cui)
    ent = store.catalog.entities[canon]
    interactions = [
        {
            "partner_cui": partner,
            "partner_name": (
                store.catalog.entities[partner].name
                if partner in store.catalog.entities
                else partner
            ),
            "interaction_id": interaction_id,
            "evidence_count": count,
        }
        for partner, interaction_id, count in store.interactions_for(canon)
    ]
    return {
        "cui": canon,
        "requested_cui": cui,
        "name": ent.name,
        "kind": ent.kind,
        "synonyms": list(ent.synonyms),
        "trade_names": list(ent.trade_names),
        "definition": ent.definition,
        "interactions_count": len(interactions),
        "interactions": interactions,
    }


def _paginate(items: list, page: int, per_page: int) -> dict:
    start = (page - 1) * per_page
    return {
        "page": page,
        "per_page": per_page,
        "total": len(items),
        "items": items[start : start + per_page],
    }


def create_app(store: Store) -> FastAPI:
    app = FastAPI(title="suppmine", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET"], allow_headers=["*"]
    )

    @app.exception_handler(HTTPException)
    async def _http_error(request, exc):
        return JSONResponse(status_code=exc.status_code, content={"error": str(exc.detail)})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request, exc):
        return JSONResponse(status_code=400, content={"error": "malformed request"})

    def _clamp_paging(page: int, per_page: int) -> tuple[int, int]:
        if page < 1 or per_page < 1:
            raise HTTPException(status_code=400, detail="page and per_page must be >= 1")
        return page, min(per_page, PER_PAGE_MAX)

    @app.get("/api/meta")
    def meta():
        if store.manifest:
            return store.manifest
        return {
            "format_version": None,
            "tau": store.tau,
            "counts": {
                "agents": len(store.catalog),
                "interactions": len(store.records),
                "evidence": store.evidence_total,
            },
        }

    @app.get("/api/agent/search")
    def agent_search(q: str = "", limit: int = 20):
        return {"query": q, "results": search_agents(store, q, limit)}

    @app.get("/api/agent/{cui}")
    def agent(cui: str):
        if not CUI_RE.match(cui):
            raise HTTPException(status_code=400, detail=f"malformed cui {cui!r}")
        detail = agent_detail(store, cui)
        if detail is None:
            raise HTTPException(status_code=404, detail=f"unknown agent {cui!r}")
        return detail

    @app.get("/api/agent/{cui}/interactions")
    def agent_interactions(cui: str, page: int = 1, per_page: int = PER_PAGE_DEFAULT):
        if not CUI_RE.match(cui):
            raise HTTPException(status_code=400, detail=f"malformed cui {cui!r}")
        page, per_page = _clamp_paging(page, per_page)
        detail = agent_detail(store, cui)
        if detail is None:
            raise HTTPException(status_code=404, detail=f"unknown agent {cui!r}")
        return {"cui": detail["cui"], **_paginate(detail["interactions"], page, per_page)}

    @app.get("/api/interaction/{interaction_id}")
    def interaction(interaction_id: str, page: int = 1, per_page: int = PER_PAGE_DEFAULT):
        m = INTERACTION_ID_RE.match(interaction_id)
        if not m:
            raise HTTPException(
                status_code=400,
                detail=f"malformed interaction id {interaction_id!r}; expected CUI-CUI",
            )
        if m.group(1) >= m.group(2):
            ordered = "-".join(sorted((m.group(1), m.group(2))))
            raise HTTPException(
                status_code=400,
                detail=f"interaction ids order their CUIs; use {ordered!r}",
            )
        page, per_page = _clamp_paging(page, per_page)
        rec = store.records.get(interaction_id)
        if rec is None:
            raise HTTPException(
                status_code=404, detail=f"unknown interaction {interaction_id!r}"
            )
        payload = record_to_dict(rec)
        agents = {}
        for cui in (rec.cui_a, rec.cui_b):
            ent = store.catalog.entities.get(cui)
            agents[cui] = {
                "cui": cui,
                "name": ent.name if ent else cui,
                "kind": ent.kind if ent else None,
            }
        return {
            "interaction_id": rec.interaction_id,
            "cui_a": rec.cui_a,
            "cui_b": rec.cui_b,
            "agents": agents,
            **_paginate(payload["evidence"], page, per_page),
        }

    return app
