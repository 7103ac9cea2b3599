"""HTTP service exposing dialogue sessions as a JSON API.

The engine stays behind the dialogue layer; the API ships session tokens,
turn outcomes, and panel snapshots. Domain failures map onto a stable
error envelope: {"error": {"code": <ExceptionName>, "message": ...}}.
User text is accepted, matched, and stored in the session transcript, but
never written to the service log.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .bundled import load_kb_files
from .dialogue import (
    DialogueConfig,
    DialogueError,
    NotClarifyingError,
    SessionConcludedError,
    SessionManager,
    UnknownSessionError,
)
from .kb import KnowledgeBase
from .nlu import (
    DEFAULT_THRESHOLD,
    HashingEncoder,
    RemoteEncoder,
    RemoteFallbackClient,
    StubFallbackClient,
)

log = logging.getLogger("arguide.service")

PLACEHOLDER_PAGE = """<!doctype html>
<html><head><title>arguide</title></head>
<body><h1>arguide service</h1>
<p>The chat front end is not built. The JSON API is live under <code>/api</code>;
see <a href="/api/health">/api/health</a>.</p>
</body></html>"""


@dataclass
class ServiceConfig:
    kb_path: str
    paraphrases_path: str
    threshold: float = DEFAULT_THRESHOLD
    host: str = "127.0.0.1"
    port: int = 8000
    encoder_spec: str = "builtin"  # "builtin" or "remote=<url>"
    fallback_spec: str = "disabled"  # "disabled", "stub" or "remote=<url>"
    static_dir: str | None = None
    extra: dict = field(default_factory=dict)


def build_encoder(spec: str):
    if spec == "builtin":
        return HashingEncoder()
    mode, sep, url = spec.partition("=")
    if mode == "remote" and sep and url:
        return RemoteEncoder(url)
    raise ValueError(f"bad encoder spec {spec!r}: expected 'builtin' or 'remote=<url>'")


def build_fallback(spec: str):
    if spec == "disabled":
        return None
    if spec == "stub":
        return StubFallbackClient()
    mode, sep, url = spec.partition("=")
    if mode == "remote" and sep and url:
        return RemoteFallbackClient(url)
    raise ValueError(f"bad fallback spec {spec!r}: expected 'disabled', 'stub' or 'remote=<url>'")


def build_manager(config: ServiceConfig) -> SessionManager:
    kb = load_kb_files(config.kb_path, config.paraphrases_path)
    return SessionManager(
        kb,
        config=DialogueConfig(threshold=config.threshold),
        encoder=build_encoder(config.encoder_spec),
        fallback_client=build_fallback(config.fallback_spec),
    )


class MessageIn(BaseModel):
    text: str


def _kb_summary(kb: KnowledgeBase) -> dict:
    return {"status_args": len(kb.status_ids()), "replies": len(kb.reply_ids())}


def create_app(manager: SessionManager, static_dir: str | Path | None = None) -> FastAPI:
    """Assemble the API around a ready SessionManager."""
    app = FastAPI(title="arguide", docs_url=None, redoc_url=None)

    @app.exception_handler(DialogueError)
    async def dialogue_error_handler(_: Request, exc: DialogueError):
        status = 500
        if isinstance(exc, UnknownSessionError):
            status = 404
        elif isinstance(exc, (SessionConcludedError, NotClarifyingError)):
            status = 409
        code = type(exc).__name__.removesuffix("Error")
        return JSONResponse(status_code=status, content={"error": {"code": code, "message": str(exc)}})

    @app.post("/api/sessions", status_code=201)
    def create_session():
        token, outcome = manager.start_session()
        return {"session_id": token, "outcome": outcome.to_dict()}

    @app.post("/api/sessions/{token}/messages")
    def post_message(token: str, message: MessageIn):
        outcome = manager.handle_turn(token, message.text)
        return {"outcome": outcome.to_dict()}

    @app.post("/api/sessions/{token}/clarification")
    def post_clarification(token: str, message: MessageIn):
        outcome = manager.resolve_clarification(token, message.text)
        return {"outcome": outcome.to_dict()}

    @app.get("/api/sessions/{token}")
    def get_snapshot(token: str):
        return manager.snapshot(token)

    @app.get("/api/health")
    def health():
        return {"status": "ok", "kb": _kb_summary(manager.kb)}

    static_path = Path(static_dir) if static_dir else None
    if static_path is not None and static_path.is_dir():
        app.mount("/", StaticFiles(directory=static_path, html=True), name="ui")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index():
            return PLACEHOLDER_PAGE

    return app


def create_app_from_config(config: ServiceConfig) -> FastAPI:
    return create_app(build_manager(config), static_dir=config.static_dir)
