"""Read-only JSON/HTTP service over an immutable model snapshot.

One snapshot is shared by all request handlers; nothing mutates after load,
so concurrent identical requests return identical bodies.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .errors import SymbolRecError, UnknownId
from .history import probabilities
from .lexicon import INVERSE_PREFIX, invert, pseudo_probabilities
from .metrics import symbol_metrics
from .projection import distances, embed, one_hot_vector, place_point, vectorize
from .ranker import BASE_CATEGORY, rank
from .snapshot import ModelSnapshot


class RankRequest(BaseModel):
    answers: dict[str, str]
    alpha: float | None = None
    focus: list[str] | None = None
    limit: int | None = None


class PlaceRequest(BaseModel):
    answers: dict[str, str]


def create_app(
    snap: ModelSnapshot,
    seed: int = 0,
    users: list[dict[str, str]] | None = None,
) -> FastAPI:
    """``users`` are optional answer vectors shown as reference points in the
    served embedding, so a visitor duplicating one lands on top of it."""
    app = FastAPI(title="symbolrec", docs_url=None, redoc_url=None)
    store, lexicon = snap.store, snap.lexicon
    schema = store.schema
    cache: dict[int, tuple] = {}  # dim -> (cloud, embedding)

    def embedding_for(dim: int):
        if dim not in cache:
            cloud = vectorize(store, lexicon, users=users, smoothing=snap.smoothing)
            cache[dim] = (cloud, embed(cloud, dim=dim, seed=seed))
        return cache[dim]

    @app.exception_handler(SymbolRecError)
    async def on_domain_error(request: Request, exc: SymbolRecError):
        status = 404 if isinstance(exc, UnknownId) else 400
        return JSONResponse(
            status_code=status,
            content={"error_code": exc.code, "message": str(exc), "detail": None},
        )

    @app.get("/schema")
    def get_schema():
        return schema.to_dict()

    @app.get("/symbols")
    def get_symbols(kind: str | None = None, category: str | None = None):
        out = []
        if kind in (None, "base"):
            for sid in store.symbol_ids:
                out.append(
                    {
                        "id": sid,
                        "name": sid,
                        "category": BASE_CATEGORY,
                        "weight": store.history(sid).n,
                    }
                )
        if lexicon is not None and kind in (None, "meta"):
            for mid in sorted(lexicon.defs):
                d = lexicon.defs[mid]
                out.append(
                    {
                        "id": mid,
                        "name": d.name,
                        "category": d.category,
                        "weight": lexicon.materialize(mid, store).n,
                        "members": sorted(lexicon.flatten(mid)),
                    }
                )
        if category is not None:
            out = [s for s in out if s["category"] == category]
        return out

    @app.post("/rank")
    def post_rank(req: RankRequest):
        ranked = rank(
            store,
            lexicon,
            req.answers,
            alpha=snap.alpha if req.alpha is None else req.alpha,
            focus=set(req.focus) if req.focus else None,
            limit=req.limit,
            smoothing=snap.smoothing,
            partial=True,
        )
        return {
            "alpha": ranked.alpha,
            "focus": sorted(ranked.focus) if ranked.focus is not None else None,
            "entries": [
                {"id": e.id, "log_score": e.log_score, "category": e.category}
                for e in ranked.entries
            ],
        }

    @app.post("/place")
    def post_place(req: PlaceRequest):
        cloud, emb = embedding_for(2)
        idx = schema.answer_indices(req.answers)
        vec = one_hot_vector(idx, schema)
        d_new = np.sqrt(((cloud.matrix - vec) ** 2).sum(axis=1))
        coords = place_point(emb, d_new, seed=seed)
        d_embed = np.sqrt(((emb.coords - coords) ** 2).sum(axis=1))
        order = np.argsort(d_embed)[:10]
        return {
            "coords": [float(c) for c in coords],
            "nearest": [
                {"id": emb.ids[i], "kind": emb.kinds[i], "distance": float(d_embed[i])}
                for i in order
            ],
        }

    @app.get("/embedding")
    def get_embedding(dim: int = 2):
        _, emb = embedding_for(dim)
        return emb.to_dict()

    @app.get("/metrics/{symbol_id}")
    def get_metrics(symbol_id: str):
        b = store.baseline()
        if symbol_id in store.symbol_rows:
            m = symbol_metrics(store.history(symbol_id), b, BASE_CATEGORY)
        elif lexicon is not None and symbol_id in lexicon:
            d = lexicon.defs[symbol_id]
            m = symbol_metrics(
                lexicon.materialize(symbol_id, store),
                b,
                d.category,
                member_count=len(lexicon.flatten(symbol_id)),
            )
        else:
            raise UnknownId(f"unknown symbol {symbol_id!r}")
        return {
            "id": m.symbol_id,
            "category": m.category,
            "total_signal": m.total_signal,
            "snr": m.snr,
            "snr_is_upper_bound": True,
            "relative_signal": m.relative_signal,
            "history_events": m.history_events,
            "member_count": m.member_count,
        }

    @app.get("/inverse/{symbol_id}")
    def get_inverse(symbol_id: str):
        b = store.baseline()
        if symbol_id in store.symbol_rows:
            h = store.history(symbol_id)
        elif lexicon is not None and symbol_id in lexicon:
            h = lexicon.materialize(symbol_id, store)
        else:
            raise UnknownId(f"unknown symbol {symbol_id!r}")
        inv = invert(h, b)
        pp = pseudo_probabilities(inv)
        mask = schema.option_mask()
        return {
            "id": inv.symbol_id,
            "source_id": inv.source_id,
            "history_events": inv.n,
            "pseudo_probabilities": [
                [float(x) for x in row[m]] for row, m in zip(pp, mask)
            ],
            "min_value": float(pp[mask].min()),
            "max_value": float(pp[mask].max()),
        }

    return app
