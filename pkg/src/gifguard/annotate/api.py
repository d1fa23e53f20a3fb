"""HTTP surface of the annotation service.

    GET  /api/next?annotator=<id>&round=<r>   next GIF or 204
    GET  /api/gif/<id>/media                  raw GIF bytes
    POST /api/label                           store one decision
    GET  /api/agreement?round=<r>&a=<id>&b=<id>
    GET  /api/disagreements?round=round1
    GET  /api/progress?annotator=<id>&round=<r>
    POST /api/finalize                        summary counts

Domain errors map to 400/404 JSON bodies carrying a stable ``error`` code.
The static annotation UI, when built, is served from the web root.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from ..errors import (
    AnnotationError,
    EmptyOverlapError,
    UnknownAnnotatorError,
    UnknownGifError,
    UnresolvedLabelsError,
)
from ..labels import Label
from .records import Criterion, Round
from .service import AnnotationService


class LabelRequest(BaseModel):
    gif_id: str
    annotator_id: str
    round: str = "round1"
    label: str
    criteria_flags: list[str] = Field(default_factory=list)


def _error_response(exc: AnnotationError, status: int) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"error": getattr(exc, "code", "annotation_error"), "detail": str(exc)},
    )


def create_app(service: AnnotationService, media_root: Path,
               static_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="gifguard annotation service")
    media_root = Path(media_root)

    @app.exception_handler(UnknownGifError)
    async def _unknown_gif(_, exc):
        return _error_response(exc, 404)

    @app.exception_handler(UnknownAnnotatorError)
    async def _unknown_annotator(_, exc):
        return _error_response(exc, 400)

    @app.exception_handler(UnresolvedLabelsError)
    async def _unresolved(_, exc):
        return _error_response(exc, 409)

    @app.exception_handler(AnnotationError)
    async def _annotation_error(_, exc):
        return _error_response(exc, 400)

    @app.get("/api/next")
    def api_next(annotator: str, round: str = "round1"):
        record = service.next_unlabeled(annotator, Round(round))
        if record is None:
            return Response(status_code=204)
        return record.to_json()

    @app.get("/api/gif/{gif_id}/media")
    def api_media(gif_id: str):
        gif = service.manifest.by_id().get(gif_id)
        if gif is None or not gif.media_path:
            raise UnknownGifError(f"unknown gif {gif_id!r}")
        data = (media_root / gif.media_path).read_bytes()
        return Response(content=data, media_type="image/gif")

    @app.post("/api/label")
    def api_label(req: LabelRequest):
        record = service.submit_label(
            gif_id=req.gif_id,
            annotator_id=req.annotator_id,
            round=Round(req.round),
            label=Label(req.label),
            criteria_flags=frozenset(Criterion(c) for c in req.criteria_flags),
        )
        return record.to_json()

    @app.get("/api/agreement")
    def api_agreement(a: str, b: str, round: str = "round1"):
        try:
            return service.agreement(Round(round), a, b).to_json()
        except EmptyOverlapError as exc:
            return _error_response(exc, 400)

    @app.get("/api/disagreements")
    def api_disagreements(round: str = "round1"):
        gifs = service.disagreements(Round(round))
        out = []
        for gif in gifs:
            entry = gif.to_json()
            entry["round1_labels"] = {
                r.annotator_id: r.label.value
                for r in service.store.for_gif(gif.id, Round.ROUND1)
            }
            out.append(entry)
        return out

    @app.get("/api/progress")
    def api_progress(annotator: str, round: str = "round1"):
        return service.progress(annotator, Round(round))

    @app.post("/api/finalize")
    def api_finalize():
        manifest, summary = service.finalize_labels()
        service.manifest = manifest
        return {"finalized": sum(summary.values()), "counts": summary}

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app
