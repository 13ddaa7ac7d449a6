"""HTTP annotation service: the label queue, IAA, adjudication, reviews, and
gold export over a small JSON API, plus a static mount for the UI bundle."""

import os
from typing import Dict, Optional

from fastapi import Depends, FastAPI, HTTPException, Request
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .agreement import AgreementReport
from .annotation import AnnotationError, AnnotationService, UnknownAnnotator, UnknownItem
from .corpus import GoldItem, Mode, RecordStore, record_to_dict

TOKEN_HEADER = "x-contraforge-token"


class LabelSubmission(BaseModel):
    annotator: str
    key: str
    label: int = Field(ge=0, le=1)


class AdjudicationSubmission(BaseModel):
    sme: str
    key: str
    label: int = Field(ge=0, le=1)


class ReviewSubmission(BaseModel):
    annotator: str
    doc_id: str
    likert: Dict[str, int]
    detected: bool


def _item_payload(item: GoldItem) -> dict:
    payload = record_to_dict(item)
    payload["sources"] = sorted(item.sources)
    return payload


def _report_payload(report: AgreementReport) -> dict:
    return {
        "percent_agreement": report.percent_agreement,
        "cohen_kappa": report.cohen_kappa,
        "kripp_alpha": report.kripp_alpha,
        "n_items": report.n_items,
        "n_annotators": report.n_annotators,
        "reasons": report.reasons,
    }


def create_app(
    service: AnnotationService,
    token: str = "",
    static_dir: Optional[str] = None,
) -> FastAPI:
    """Build the API around one annotation service instance.

    When `token` is non-empty every request must carry it in the
    x-contraforge-token header; an empty token disables auth (local use).
    """
    app = FastAPI(title="contraforge annotation service")

    def require_token(request: Request) -> None:
        if token and request.headers.get(TOKEN_HEADER) != token:
            raise HTTPException(status_code=401, detail="missing or bad token")

    guard = [Depends(require_token)]

    @app.get("/api/queue/next", dependencies=guard)
    def queue_next(annotator: str):
        try:
            item = service.next_item(annotator)
        except UnknownAnnotator as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        if item is None:
            return {"item": None, "remaining": 0}
        remaining = len(service.items) - len(service.labeled_keys(annotator))
        return {"item": _item_payload(item), "remaining": remaining}

    @app.post("/api/labels", dependencies=guard)
    def submit_label(body: LabelSubmission):
        try:
            record = service.submit_label(body.annotator, body.key, body.label)
        except UnknownAnnotator as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except UnknownItem as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except AnnotationError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return record_to_dict(record)

    @app.get("/api/items/{key}", dependencies=guard)
    def get_item(key: str):
        if key not in service.items:
            raise HTTPException(status_code=404, detail=f"no gold item with key {key}")
        payload = _item_payload(service.consolidated(key))
        payload["labels"] = service.item_labels(key)
        payload["agreement"] = service.item_agreement(key)
        return payload

    @app.get("/api/iaa", dependencies=guard)
    def iaa(mode: Optional[str] = None):
        parsed: Optional[Mode] = None
        if mode is not None:
            try:
                parsed = Mode(mode)
            except ValueError:
                raise HTTPException(status_code=422, detail=f"unknown mode {mode!r}")
        return _report_payload(service.iaa(parsed))

    @app.get("/api/adjudication", dependencies=guard)
    def adjudication_queue():
        return {"items": [_item_payload(i) for i in service.adjudication_queue()]}

    @app.post("/api/adjudication", dependencies=guard)
    def submit_adjudication(body: AdjudicationSubmission):
        try:
            record = service.submit_adjudication(body.sme, body.key, body.label)
        except UnknownItem as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except AnnotationError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return record_to_dict(record)

    @app.post("/api/reviews", dependencies=guard)
    def submit_review(body: ReviewSubmission):
        try:
            record = service.record_doc_review(
                body.annotator, body.doc_id, body.likert, body.detected
            )
        except UnknownAnnotator as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except (AnnotationError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return record_to_dict(record)

    @app.get("/api/export/gold", dependencies=guard)
    def export_gold():
        return {"items": [_item_payload(i) for i in service.export_gold()]}

    if static_dir and os.path.isdir(static_dir):
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def app_from_store(
    store_path: str,
    token: str = "",
    static_dir: Optional[str] = None,
    annotators=None,
) -> FastAPI:
    """Convenience wiring: gold items and prior labels come from one store."""
    store = RecordStore(store_path)
    items = store.load_kind(GoldItem)
    service = AnnotationService(items, store=store, annotators=annotators or [])
    return create_app(service, token=token, static_dir=static_dir)
