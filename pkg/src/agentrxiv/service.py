"""HTTP JSON API over the archive.

Routes: POST /api/papers, GET /api/search, GET /api/papers, GET
/api/papers/{id}, POST /api/papers/{id}/review, GET /api/health.  Uploads
are stored and indexed synchronously before the response is sent, so any
search that starts after an upload is acknowledged can return the paper.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .archive import ArchiveStore
from .errors import ArchiveError, EmptyDocument, NotFound, StorageFailure
from .records import PaperRecord, ReviewStatus, SourceFormat
from .retrieval import Searcher, SearchQuery

# Closed set of machine-readable error codes.
ERROR_CODES = {
    "invalid_payload": 400,
    "not_found": 404,
    "conflict": 409,
    "storage_failure": 500,
    "internal_error": 500,
}


class ApiException(Exception):
    def __init__(self, code: str, message: str):
        assert code in ERROR_CODES
        self.code = code
        self.message = message
        self.http_status = ERROR_CODES[code]


class UploadRequest(BaseModel):
    title: str = ""
    authors: list[str] = []
    abstract: str = ""
    body: str
    format: str = "markdown"
    lab_id: str | None = None
    idempotency_token: str | None = None


class ReviewRequest(BaseModel):
    status: str
    note: str | None = None


def record_payload(record: PaperRecord) -> dict:
    payload = record.to_dict()
    payload["url"] = f"/api/papers/{record.paper_id}"
    return payload


def create_app(store: ArchiveStore) -> FastAPI:
    app = FastAPI(title="agentrxiv")
    searcher = Searcher(store)
    app.state.store = store
    app.state.searcher = searcher
    # idempotency token -> paper_id, so retried uploads collapse to one record
    app.state.idempotency: dict[str, str] = {}
    app.state.idempotency_lock = threading.Lock()

    @app.exception_handler(ApiException)
    async def api_exception_handler(request: Request, exc: ApiException):
        return JSONResponse(
            status_code=exc.http_status,
            content={"code": exc.code, "message": exc.message},
        )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "invalid_payload", "message": str(exc.errors()[:1])},
        )

    @app.post("/api/papers")
    def handle_upload(req: UploadRequest):
        if not req.body.strip():
            raise ApiException("invalid_payload", "body must be non-empty")
        try:
            source_format = SourceFormat(req.format)
        except ValueError:
            raise ApiException("invalid_payload", f"unknown format: {req.format}")
        if req.idempotency_token:
            with app.state.idempotency_lock:
                seen = app.state.idempotency.get(req.idempotency_token)
            if seen is not None:
                return {"paper_id": seen, "url": f"/api/papers/{seen}"}
        hint = {}
        if req.title:
            hint["title"] = req.title
        if req.authors:
            hint["authors"] = req.authors
        if req.abstract:
            hint["abstract"] = req.abstract
        try:
            record = store.ingest_document(req.body.encode("utf-8"), source_format, hint)
        except EmptyDocument as exc:
            raise ApiException("invalid_payload", str(exc))
        except ArchiveError as exc:
            raise ApiException("invalid_payload", str(exc))
        if not record.title:
            raise ApiException("invalid_payload", "title could not be determined")
        record.lab_id = req.lab_id
        try:
            paper_id = store.store_paper(record)
        except StorageFailure as exc:
            raise ApiException("storage_failure", str(exc))
        if req.idempotency_token:
            with app.state.idempotency_lock:
                app.state.idempotency[req.idempotency_token] = paper_id
        return {"paper_id": paper_id, "url": f"/api/papers/{paper_id}"}

    @app.get("/api/search")
    def handle_search(
        q: str = "",
        k: int = 5,
        exclude_flagged: bool = False,
        exclude_lab: str | None = None,
    ):
        if not q:
            raise ApiException("invalid_payload", "missing query parameter q")
        if k < 1:
            raise ApiException("invalid_payload", "k must be >= 1")
        hits = searcher.search(
            SearchQuery(
                text=q, k=k, exclude_flagged=exclude_flagged, exclude_lab=exclude_lab
            )
        )
        return [
            {
                "paper_id": h.paper_id,
                "title": h.title,
                "abstract": h.abstract,
                "similarity": h.similarity,
                "rank": h.rank,
                "url": f"/api/papers/{h.paper_id}",
            }
            for h in hits
        ]

    @app.get("/api/papers")
    def handle_list(lab_id: str | None = None, review_status: str | None = None):
        status = None
        if review_status is not None:
            try:
                status = ReviewStatus(review_status)
            except ValueError:
                raise ApiException("invalid_payload", f"unknown status: {review_status}")
        return [record_payload(r) for r in store.list_papers(lab_id, status)]

    @app.get("/api/papers/{paper_id}")
    def handle_get_paper(paper_id: str):
        try:
            return record_payload(store.get_paper(paper_id))
        except NotFound as exc:
            raise ApiException("not_found", str(exc))

    @app.post("/api/papers/{paper_id}/review")
    def handle_review(paper_id: str, req: ReviewRequest):
        try:
            status = ReviewStatus(req.status)
        except ValueError:
            raise ApiException("invalid_payload", f"unknown status: {req.status}")
        try:
            return record_payload(store.set_review_status(paper_id, status, req.note))
        except NotFound as exc:
            raise ApiException("not_found", str(exc))

    @app.get("/api/health")
    def handle_health():
        return {"status": "ok", "paper_count": store.paper_count}

    return app
