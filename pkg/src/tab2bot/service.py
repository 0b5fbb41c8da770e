"""HTTP chat service over a loaded bundle.

Endpoints: POST /chat, GET /schema, GET /intents, GET /health. Sessions
live in memory with idle expiry; requests for the same session are
serialized by a per-session lock, while different sessions proceed
independently over the shared immutable bundle context.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import replace

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from .bundle import LoadedBundle
from .runtime import BotEngine, BotReply, Session

logger = logging.getLogger("tab2bot.service")

DEFAULT_SESSION_TTL_SECONDS = 30 * 60


class ChatRequest(BaseModel):
    session_id: str
    utterance: str


class ChatResponse(BaseModel):
    reply_kind: str
    text: str
    rows: list[dict[str, str]] | None = None
    scalar: float | int | str | None = None
    matched_intent: str = ""
    score: float = 0.0


class _SessionStore:
    """In-memory sessions with idle expiry and per-session locks."""

    def __init__(self, ttl_seconds: float, clock=time.monotonic):
        self._ttl = ttl_seconds
        self._clock = clock
        self._guard = threading.Lock()
        self._sessions: dict[str, tuple[Session, threading.Lock, float]] = {}

    def acquire(self, session_id: str) -> tuple[Session, threading.Lock]:
        now = self._clock()
        with self._guard:
            expired = [
                key
                for key, (_, _, last) in self._sessions.items()
                if now - last > self._ttl
            ]
            for key in expired:
                del self._sessions[key]
            if session_id not in self._sessions:
                self._sessions[session_id] = (Session(id=session_id), threading.Lock(), now)
            session, lock, _ = self._sessions[session_id]
            self._sessions[session_id] = (session, lock, now)
            return session, lock


def reply_to_response(reply: BotReply, headers: tuple[str, ...]) -> ChatResponse:
    rows = None
    if reply.rows is not None:
        rows = [dict(zip(headers, cells)) for _, cells in reply.rows]
    return ChatResponse(
        reply_kind=reply.kind.value,
        text=reply.text,
        rows=rows,
        scalar=reply.scalar,
        matched_intent=reply.matched_intent,
        score=reply.score,
    )


def create_app(
    bundle: LoadedBundle,
    allow_origin: str | None = None,
    enable_mutation: bool | None = None,
    session_ttl_seconds: float = DEFAULT_SESSION_TTL_SECONDS,
) -> FastAPI:
    """Build the FastAPI app around one immutable bundle context."""
    cfg = bundle.runtime_config
    if enable_mutation is not None:
        cfg = replace(cfg, enable_mutation=enable_mutation)
    engine = BotEngine(bundle.table, bundle.schema, bundle.intents, bundle.ops, cfg)
    sessions = _SessionStore(session_ttl_seconds)

    app = FastAPI(title="tab2bot", docs_url=None, redoc_url=None)

    if allow_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[allow_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(RequestValidationError)
    async def _bad_request(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": "malformed request body"})

    @app.exception_handler(Exception)
    async def _internal_error(request: Request, exc: Exception):
        logger.exception("unhandled error serving %s", request.url.path)
        return JSONResponse(status_code=500, content={"detail": "internal server error"})

    @app.get("/health")
    def health() -> PlainTextResponse:
        return PlainTextResponse("ok")

    @app.get("/schema")
    def schema() -> dict:
        return bundle.schema.to_dict()

    @app.get("/intents")
    def intents() -> list[dict]:
        return [
            {
                "name": intent.name,
                "training_sentences": [s.template for s in intent.training_sentences],
            }
            for intent in bundle.intents.intents
        ]

    @app.post("/chat")
    def chat(request: ChatRequest) -> ChatResponse:
        utterance = request.utterance.strip()
        if not utterance:
            raise HTTPException(status_code=400, detail="utterance must not be empty")
        if not request.session_id.strip():
            raise HTTPException(status_code=400, detail="session_id must not be empty")
        session, lock = sessions.acquire(request.session_id)
        with lock:
            reply = engine.chat(session, utterance)
        return reply_to_response(reply, bundle.table.headers)

    return app
