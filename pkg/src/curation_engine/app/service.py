"""HTTP face of the engine.

Every route body is the JSON form of the matching engine method's
parameters and every response is the engine payload unchanged, so a
command-line call and an HTTP call with the same inputs give the same
answer. Errors come back as {error_code, message, detail} with the status
chosen from the error type: 400 for bad requests, 404 for unknown names,
409 for id conflicts, 502 for provider or wrapper trouble, 503 when a
writer holds the store.
"""

from __future__ import annotations

from typing import Any, Mapping

from fastapi import Body, FastAPI, Request
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from ..errors import (
    CurationError,
    DuplicateId,
    HttpError,
    ProviderFailure,
    StoreBusy,
    Unparseable,
    UnknownAgent,
    UnknownCollection,
    UnknownObject,
)
from .config import SessionConfig, load_config
from .engine import AGENT_NAMES, Engine


def status_for(err: CurationError) -> int:
    if isinstance(err, StoreBusy):
        return 503
    if isinstance(err, (ProviderFailure, HttpError, Unparseable)):
        return 502
    if isinstance(err, DuplicateId):
        return 409
    if isinstance(err, (UnknownCollection, UnknownObject, UnknownAgent)):
        return 404
    return 400


def create_app(engine: "Engine | None" = None, config: "SessionConfig | None" = None) -> FastAPI:
    engine = engine if engine is not None else Engine(config or load_config())
    app = FastAPI(title="curation-engine", docs_url=None, redoc_url=None)
    app.state.engine = engine
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(CurationError)
    async def _domain_error(request: Request, exc: CurationError):
        return JSONResponse(status_code=status_for(exc), content=jsonable_encoder(exc.payload()))

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={"error_code": "validation", "message": str(exc), "detail": {}},
        )

    @app.exception_handler(RequestValidationError)
    async def _request_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={
                "error_code": "validation",
                "message": "invalid request",
                "detail": {"errors": jsonable_encoder(exc.errors())},
            },
        )

    # --- collections -------------------------------------------------------

    @app.get("/collections")
    def collections_list():
        return engine.collections_list()

    @app.post("/collections", status_code=201)
    def collections_create(body: dict = Body(...)):
        name = body.get("name")
        if not name:
            raise ValueError("missing required field 'name'")
        return engine.collections_create(str(name), metric=str(body.get("metric", "cosine")))

    @app.get("/collections/{name}")
    def collection_show(name: str):
        return engine.collection_show(name)

    @app.delete("/collections/{name}")
    def collections_delete(name: str):
        return engine.collections_delete(name)

    @app.post("/collections/{name}/objects", status_code=201)
    def insert_object(name: str, body: dict = Body(...)):
        return engine.insert_object(name, body)

    @app.get("/collections/{name}/search")
    def collection_search(
        name: str,
        q: str,
        k: int = 10,
        diversify: bool = False,
        lambda_param: float = 0.5,
    ):
        if not engine.store.exists(name):
            raise UnknownCollection(f"no collection named {name!r}")
        return engine.search(q, source=name, k=k, diversify=diversify, lambda_param=lambda_param)

    @app.get("/collections/{name}/projection")
    def collection_projection(name: str):
        return engine.projection(name)

    @app.post("/collections/{name}/ingest")
    def collection_ingest(name: str, body: dict = Body(...)):
        kind = body.get("kind")
        path = body.get("path")
        if not kind or not path:
            raise ValueError("ingest needs 'kind' and 'path'")
        return engine.ingest(
            str(kind),
            str(path),
            collection=name,
            format=body.get("format"),
            id_field=str(body.get("id_field", "id")),
            label_field=str(body.get("label_field", "label")),
        )

    @app.post("/collections/{name}/index")
    def collection_index(name: str):
        return engine.index_build(name)

    @app.post("/collections/{name}/export")
    def collection_export(name: str, body: dict = Body(...)):
        path = body.get("path")
        if not path:
            raise ValueError("export needs 'path'")
        return engine.bundle_export(name, str(path))

    @app.post("/collections/import")
    def collection_import(body: dict = Body(...)):
        path = body.get("path")
        if not path:
            raise ValueError("import needs 'path'")
        name = body.get("name")
        return engine.bundle_import(str(path), str(name) if name else None)

    # --- agents --------------------------------------------------------------

    @app.post("/agents/{agent}")
    def run_agent(agent: str, body: dict = Body(default={})):
        if agent not in AGENT_NAMES:
            raise UnknownAgent(f"no agent named {agent!r}", detail={"agents": list(AGENT_NAMES)})
        return engine.run_agent(agent, body)

    # --- cart and config -------------------------------------------------------

    @app.get("/cart")
    def cart_list():
        return engine.cart_list()

    @app.post("/cart")
    def cart_ops(body: dict = Body(...)):
        op = str(body.get("op", ""))
        if op == "add":
            return engine.cart_add(
                object_id=str(body.get("object_id", "")),
                source=str(body.get("source", "")),
                purpose=body.get("purpose", "refine"),
            )
        if op == "remove":
            return engine.cart_remove(
                object_id=str(body.get("object_id", "")),
                source=str(body.get("source", "")),
            )
        raise ValueError(f"unknown cart op {op!r} (choices: add, remove)")

    @app.get("/config")
    def config_show():
        return engine.config_payload()

    return app
