"""Canonical paper store: flat data directory of document files plus a
single-file index with one JSON row per paper (including its embedding).

All writes serialize through a single lock; readers take a snapshot of the
row table and never observe a partially applied write.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .embedding import EmbeddingProvider, HashedEmbedding
from .errors import ArchiveError, NotFound, StorageFailure
from .ingest import PdfExtractor, ingest_document
from .records import (
    EXTENSION_FORMATS,
    FORMAT_EXTENSIONS,
    PaperRecord,
    ReviewStatus,
    SourceFormat,
    SyncReport,
    content_hash,
)


@dataclass
class IndexRow:
    record: PaperRecord
    embedding: np.ndarray


def _row_to_json(row: IndexRow) -> str:
    payload = row.record.to_dict()
    payload["embedding"] = [float(x) for x in row.embedding]
    return json.dumps(payload, ensure_ascii=False)


def _row_from_json(line: str) -> IndexRow:
    payload = json.loads(line)
    embedding = np.asarray(payload.pop("embedding"), dtype=np.float64)
    return IndexRow(record=PaperRecord.from_dict(payload), embedding=embedding)


def _sort_key(record: PaperRecord):
    return (record.uploaded_at, record.paper_id)


class ArchiveStore:
    """File-backed paper archive with an embedded similarity index."""

    def __init__(
        self,
        data_dir: str | Path,
        embedder: EmbeddingProvider | None = None,
        pdf_extractor: PdfExtractor | None = None,
    ):
        self.data_dir = Path(data_dir)
        self.papers_dir = self.data_dir / "papers"
        self.index_path = self.data_dir / "index"
        self.embedder = embedder or HashedEmbedding()
        self.pdf_extractor = pdf_extractor
        self._lock = threading.RLock()
        self._rows: dict[str, IndexRow] = {}
        self._row_json: dict[str, str] = {}
        self.papers_dir.mkdir(parents=True, exist_ok=True)
        self._load()

    # -- persistence ---------------------------------------------------

    def _load(self) -> None:
        if not self.index_path.exists():
            return
        for line in self.index_path.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line:
                continue
            try:
                row = _row_from_json(line)
            except (ValueError, KeyError):
                continue  # tolerate a torn trailing line from a crashed write
            self._rows[row.record.paper_id] = row
            self._row_json[row.record.paper_id] = line

    def _rewrite_index(self) -> None:
        ordered = sorted(self._rows.values(), key=lambda r: _sort_key(r.record))
        body = "".join(self._row_json[r.record.paper_id] + "\n" for r in ordered)
        tmp = self.index_path.with_suffix(".tmp")
        tmp.write_text(body, encoding="utf-8")
        os.replace(tmp, self.index_path)

    def _append_row(self, paper_id: str) -> None:
        line = self._row_json[paper_id] + "\n"
        with open(self.index_path, "a", encoding="utf-8") as fh:
            offset = fh.tell()
            try:
                fh.write(line)
                fh.flush()
            except OSError:
                fh.truncate(offset)
                raise

    def _paper_path(self, paper_id: str, source_format: SourceFormat) -> Path:
        ext = FORMAT_EXTENSIONS[SourceFormat(source_format)]
        return self.papers_dir / f"{paper_id}.{ext}"

    # -- core operations -----------------------------------------------

    def embedding_text(self, record: PaperRecord) -> str:
        return f"{record.title}\n{record.abstract}\n{record.body_text}"

    def ingest_document(
        self, raw: bytes, source_format: SourceFormat, hint: dict | None = None
    ) -> PaperRecord:
        return ingest_document(raw, source_format, hint, self.pdf_extractor)

    def store_paper(self, record: PaperRecord) -> str:
        """Persist body bytes and index row atomically; returns the paper_id.

        Duplicate content is stored as a new record: the archive keeps every
        submission, so distinct paper_ids may share a content_hash.
        """
        if not record.body_text:
            raise StorageFailure("record has empty body_text")
        raw = record.source_bytes or record.body_text.encode("utf-8")
        if content_hash(raw) != record.content_hash:
            raise StorageFailure("content_hash does not match body bytes")
        with self._lock:
            if record.paper_id in self._rows:
                raise StorageFailure(f"paper_id already stored: {record.paper_id}")
            path = self._paper_path(record.paper_id, record.source_format)
            tmp = path.with_suffix(path.suffix + ".tmp")
            try:
                tmp.write_bytes(raw)
                os.replace(tmp, path)
                embedding = self.embedder.embed(self.embedding_text(record))
                row = IndexRow(record=record, embedding=embedding)
                self._row_json[record.paper_id] = _row_to_json(row)
                self._append_row(record.paper_id)
                self._rows[record.paper_id] = row
            except ArchiveError:
                raise
            except Exception as exc:
                tmp.unlink(missing_ok=True)
                path.unlink(missing_ok=True)
                self._row_json.pop(record.paper_id, None)
                raise StorageFailure(f"store failed: {exc}") from exc
            return record.paper_id

    def get_paper(self, paper_id: str) -> PaperRecord:
        with self._lock:
            row = self._rows.get(paper_id)
        if row is None:
            raise NotFound(f"no such paper: {paper_id}")
        return row.record

    def list_papers(
        self,
        lab_id: str | None = None,
        review_status: ReviewStatus | None = None,
    ) -> list[PaperRecord]:
        """All papers ordered by uploaded_at ascending, paper_id as tiebreak."""
        with self._lock:
            records = [row.record for row in self._rows.values()]
        if lab_id is not None:
            records = [r for r in records if r.lab_id == lab_id]
        if review_status is not None:
            review_status = ReviewStatus(review_status)
            records = [r for r in records if r.review_status == review_status]
        return sorted(records, key=_sort_key)

    def set_review_status(
        self, paper_id: str, status: ReviewStatus, note: str | None = None
    ) -> PaperRecord:
        status = ReviewStatus(status)
        with self._lock:
            row = self._rows.get(paper_id)
            if row is None:
                raise NotFound(f"no such paper: {paper_id}")
            updated = IndexRow(record=row.record.with_review(status, note), embedding=row.embedding)
            self._rows[paper_id] = updated
            self._row_json[paper_id] = _row_to_json(updated)
            self._rewrite_index()
            return updated.record

    # -- index maintenance ---------------------------------------------

    def index_paper(self, record: PaperRecord) -> None:
        """Upsert the index row (and embedding) for a record; idempotent."""
        with self._lock:
            embedding = self.embedder.embed(self.embedding_text(record))
            row = IndexRow(record=record, embedding=embedding)
            self._rows[record.paper_id] = row
            self._row_json[record.paper_id] = _row_to_json(row)
            self._rewrite_index()

    def remove_from_index(self, paper_id: str) -> None:
        with self._lock:
            if paper_id not in self._rows:
                raise NotFound(f"no such paper: {paper_id}")
            del self._rows[paper_id]
            del self._row_json[paper_id]
            self._rewrite_index()

    def snapshot_rows(self) -> list[IndexRow]:
        """Consistent point-in-time view of the index for searching."""
        with self._lock:
            return list(self._rows.values())

    @property
    def paper_count(self) -> int:
        with self._lock:
            return len(self._rows)

    # -- reconciliation ------------------------------------------------

    def sync_store(self) -> SyncReport:
        """Reconcile the index with the files in the data directory.

        Files present but unindexed are ingested (added); rows whose file is
        missing are deleted (removed); hash matches are untouched (unchanged);
        hash mismatches are re-extracted and re-embedded (reindexed).
        Per-file extraction failures are recorded and skipped.
        """
        started = time.monotonic()
        report = SyncReport()
        with self._lock:
            seen: set[str] = set()
            dirty = False
            for path in sorted(self.papers_dir.iterdir()):
                ext = path.suffix.lstrip(".")
                if ext not in EXTENSION_FORMATS:
                    continue
                paper_id = path.stem
                seen.add(paper_id)
                source_format = EXTENSION_FORMATS[ext]
                raw = path.read_bytes()
                existing = self._rows.get(paper_id)
                if existing is not None and existing.record.content_hash == content_hash(raw):
                    report.unchanged += 1
                    continue
                try:
                    record = ingest_document(raw, source_format, pdf_extractor=self.pdf_extractor)
                except ArchiveError as exc:
                    report.failures.append(f"{path.name}: {exc}")
                    continue
                if existing is not None:
                    # keep identity and review state; refresh content
                    record.paper_id = paper_id
                    record.uploaded_at = existing.record.uploaded_at
                    record.lab_id = existing.record.lab_id
                    record.review_status = existing.record.review_status
                    record.review_note = existing.record.review_note
                    report.reindexed += 1
                else:
                    record.paper_id = paper_id
                    record.uploaded_at = datetime.fromtimestamp(
                        path.stat().st_mtime, tz=timezone.utc
                    )
                    report.added += 1
                row = IndexRow(
                    record=record,
                    embedding=self.embedder.embed(self.embedding_text(record)),
                )
                self._rows[paper_id] = row
                self._row_json[paper_id] = _row_to_json(row)
                dirty = True
            for paper_id in list(self._rows):
                if paper_id not in seen:
                    del self._rows[paper_id]
                    del self._row_json[paper_id]
                    report.removed += 1
                    dirty = True
            if dirty:
                self._rewrite_index()
        report.duration = time.monotonic() - started
        return report
