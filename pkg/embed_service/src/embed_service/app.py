"""FastAPI app: POST /v1/embed, GET /healthz, GET /v1/info.

The encoder loads in a background thread so the server binds immediately;
/healthz answers 503 until it is ready and the other routes gate on the same
flag. Request validation failures map to 400 (not FastAPI's default 422) to
match the client contract. Responses are plain JSON: /v1/embed carries
``{"dim": int, "vectors": [[...], ...]}`` with one vector per input text,
in input order.
"""

from __future__ import annotations

import os
import threading
from contextlib import asynccontextmanager

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .encoders import DEFAULT_MODEL, load_encoder

MAX_TEXT_CHARS = 10_000


class EmbedRequest(BaseModel):
    texts: list[str]


class ServiceState:
    """Readiness shared between the loader thread and the route handlers."""

    def __init__(self, model_name: str, max_batch: int):
        self.model_name = model_name
        self.max_batch = max_batch
        self.encoder = None
        self.load_error: str | None = None

    def load(self, loader) -> None:
        try:
            self.encoder = loader(self.model_name)
        except Exception as exc:  # surfaced via /healthz and /v1/embed
            self.load_error = f"{type(exc).__name__}: {exc}"


def create_app(model_name: str | None = None, max_batch: int | None = None,
               loader=load_encoder) -> FastAPI:
    name = model_name or os.environ.get("MODEL_NAME", DEFAULT_MODEL)
    limit = int(max_batch if max_batch is not None else os.environ.get("MAX_BATCH", "64"))
    if limit < 1:
        raise ValueError(f"max_batch must be positive, got {limit}")
    state = ServiceState(name, limit)

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        threading.Thread(target=state.load, args=(loader,), daemon=True).start()
        yield

    app = FastAPI(title="embed-service", lifespan=lifespan)
    app.state.service = state

    @app.exception_handler(RequestValidationError)
    async def bad_request(_, exc: RequestValidationError):
        return JSONResponse({"detail": "invalid request body"}, status_code=400)

    def require_encoder():
        if state.load_error is not None:
            raise HTTPException(500, f"model failed to load: {state.load_error}")
        if state.encoder is None:
            raise HTTPException(503, "model is loading")
        return state.encoder

    @app.get("/healthz")
    def healthz():
        if state.load_error is not None:
            return JSONResponse({"status": "error", "detail": state.load_error},
                                status_code=503)
        if state.encoder is None:
            return JSONResponse({"status": "loading"}, status_code=503)
        return {"status": "ok"}

    @app.get("/v1/info")
    def info():
        encoder = require_encoder()
        return {"model": encoder.name, "dim": encoder.dim}

    @app.post("/v1/embed")
    def embed(request: EmbedRequest):
        encoder = require_encoder()
        if not request.texts:
            raise HTTPException(400, "texts must be non-empty")
        if len(request.texts) > state.max_batch:
            raise HTTPException(
                413, f"batch of {len(request.texts)} exceeds max_batch {state.max_batch}")
        for position, text in enumerate(request.texts):
            if len(text) > MAX_TEXT_CHARS:
                raise HTTPException(
                    400, f"text {position} exceeds {MAX_TEXT_CHARS} characters")
        try:
            vectors = encoder.encode(request.texts)
        except Exception as exc:
            raise HTTPException(500, f"model failure: {exc}") from exc
        return {"dim": encoder.dim,
                "vectors": [np.asarray(vec, dtype=float).tolist() for vec in vectors]}

    return app
