"""HTTP scoring service for the rehearsal workflow.

Wraps one immutable trained model behind a small JSON API:

    POST /score             {"text": "..."} -> {"sentences": [...]}
    GET  /model/importance  global relative-importance ranking
    GET  /healthz           liveness probe

Request handling is stateless; every /score response carries the loaded
model file's hash in the X-Model-Fingerprint header.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ValidationError

from .features import FeatureRegistry
from .lasso import ImportanceUndefined, LassoModel, relative_importance
from .lexicons import LexiconBundle
from .pipeline import Config, load_resources, score_draft

MAX_BODY_BYTES = 1_000_000


class ScoreRequest(BaseModel):
    text: str


class FiredDevice(BaseModel):
    feature_name: str
    value: float


class SentenceScore(BaseModel):
    text: str
    probability: float
    fired_devices: list[FiredDevice]


class ScoreResponse(BaseModel):
    sentences: list[SentenceScore]


class ImportanceEntry(BaseModel):
    feature_name: str
    weight: float


class ImportanceResponse(BaseModel):
    importance: list[ImportanceEntry]


@dataclass(frozen=True)
class ModelStore:
    """Everything a worker needs to score requests, loaded once."""

    model: LassoModel
    bundle: LexiconBundle
    registry: FeatureRegistry
    fingerprint: str


def build_store(model_path: str | Path, config: Config) -> ModelStore:
    bundle, registry = load_resources(config)
    model = LassoModel.load(model_path)
    fingerprint = hashlib.sha256(Path(model_path).read_bytes()).hexdigest()
    return ModelStore(model, bundle, registry, fingerprint)


def create_app(store: ModelStore, cors_origin: str = "*") -> FastAPI:
    app = FastAPI(title="ovation scoring service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[cors_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def invalid_request(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "invalid request body"})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/score", response_model=ScoreResponse)
    async def score(request: Request):
        body = await request.body()
        if len(body) > MAX_BODY_BYTES:
            return JSONResponse(status_code=413, content={"error": "request body too large"})
        try:
            payload = ScoreRequest.model_validate(json.loads(body))
        except (json.JSONDecodeError, UnicodeDecodeError, ValidationError):
            return JSONResponse(status_code=400, content={"error": "invalid request body"})
        results = score_draft(store.model, store.bundle, store.registry, payload.text)
        response = ScoreResponse(sentences=[
            SentenceScore(
                text=r.text,
                probability=r.probability,
                fired_devices=[
                    FiredDevice(feature_name=name, value=value)
                    for name, value in r.fired_devices
                ],
            )
            for r in results
        ])
        return JSONResponse(
            content=response.model_dump(),
            headers={"X-Model-Fingerprint": store.fingerprint},
        )

    @app.get("/model/importance", response_model=ImportanceResponse)
    def model_importance():
        try:
            weights = relative_importance(store.model)
        except ImportanceUndefined:
            weights = {}
        ranked = sorted(weights.items(), key=lambda kv: (-kv[1], kv[0]))
        return ImportanceResponse(importance=[
            ImportanceEntry(feature_name=name, weight=weight)
            for name, weight in ranked
        ])

    return app
