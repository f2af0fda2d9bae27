"""HTTP service exposing the interaction loop and the console assets.

Training never happens in this process; the engine only reads a trained
checkpoint. Memory appends go through the engine's single-writer store.
"""

from __future__ import annotations

import os
import threading
from typing import Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles

from afeng import __version__
from afeng.errors import EmptyText, TooLong
from afeng.labels import EMOTION_NAMES
from afeng.memory import InteractionRecord
from afeng.pipeline import EmotionBehaviorEngine
from afeng.schemas import HistoryItem, InteractRequest, InteractResponse, ModelInfo

FALLBACK_PAGE = """<!DOCTYPE html>
<html>
<head><meta charset="utf-8"><title>afeng</title></head>
<body>
<h1>afeng service</h1>
<p>The console bundle is not installed. The API is available at:</p>
<ul>
<li>POST /api/interact</li>
<li>GET /api/history?n=K</li>
<li>GET /api/model/info</li>
</ul>
</body>
</html>
"""


def _error(status: int, code: str, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail={"code": code, "message": message})


def _history_item(rec: InteractionRecord) -> HistoryItem:
    return HistoryItem(
        record_id=rec.id,
        timestamp=rec.timestamp,
        text=rec.text,
        dominant=rec.appraisal.dominant.canonical_name,
        intensity=rec.appraisal.intensity,
        valence=rec.appraisal.valence.value,
        bml_id=rec.bml_id,
        distribution=rec.distribution.as_mapping(),
    )


def default_static_dir() -> Optional[str]:
    override = os.environ.get("AFENG_STATIC")
    if override:
        return override
    here = os.path.dirname(os.path.abspath(__file__))
    candidate = os.path.normpath(
        os.path.join(here, "..", "..", "frontend", "dist")
    )
    return candidate if os.path.isdir(candidate) else None


def create_app(
    engine: Optional[EmotionBehaviorEngine] = None,
    static_dir: Optional[str] = None,
) -> FastAPI:
    app = FastAPI(title="afeng", version=__version__)
    app.state.engine = engine
    # one writer at a time: interact mutates the memory store
    app.state.interact_lock = threading.Lock()

    def require_engine() -> EmotionBehaviorEngine:
        current = app.state.engine
        if current is None:
            raise _error(503, "ModelNotLoaded", "no model checkpoint is loaded")
        return current

    @app.post("/api/interact", response_model=InteractResponse)
    def interact(request: InteractRequest):
        current = require_engine()
        try:
            with app.state.interact_lock:
                result = current.interact(request.text)
        except EmptyText as exc:
            raise _error(400, "EmptyText", str(exc)) from exc
        except TooLong as exc:
            raise _error(400, "TooLong", str(exc)) from exc
        return InteractResponse.model_validate(result.to_payload())

    @app.get("/api/history", response_model=list[HistoryItem])
    def history(n: int = Query(default=10, ge=0)):
        current = app.state.engine
        if current is None:
            return []
        return [_history_item(rec) for rec in current.history(n)]

    @app.get("/api/model/info", response_model=ModelInfo)
    def model_info():
        current = require_engine()
        return ModelInfo.model_validate(current.model_info())

    if static_dir is None:
        static_dir = default_static_dir()
    if static_dir and os.path.isdir(static_dir):
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="console")
    else:
        @app.get("/", response_class=HTMLResponse, include_in_schema=False)
        def index():
            return FALLBACK_PAGE

    return app


def build_engine(
    home: Optional[str] = None,
    checkpoint: Optional[str] = None,
    vocab: Optional[str] = None,
    log: Optional[str] = None,
    blend_lambda: float = 0.0,
) -> Optional[EmotionBehaviorEngine]:
    """Resolve artifact paths (flags override AFENG_HOME) and load the engine.

    Returns None when no checkpoint can be located, letting the service
    start in the 503 ModelNotLoaded state.
    """
    if home is None:
        home = os.environ.get("AFENG_HOME")
    if home:
        checkpoint = checkpoint or os.path.join(home, "model.ckpt")
        vocab = vocab or os.path.join(home, "vocab.txt")
        log = log or os.path.join(home, "interactions.log")
    if not checkpoint or not os.path.exists(checkpoint):
        return None
    if not vocab or not os.path.exists(vocab):
        return None
    return EmotionBehaviorEngine.load(
        checkpoint, vocab, log_path=log, blend_lambda=blend_lambda
    )


__all__ = ["create_app", "build_engine", "EMOTION_NAMES"]
