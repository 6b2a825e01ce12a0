"""Paper record types and helpers for the archive."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum


class SourceFormat(str, Enum):
    plain_text = "plain_text"
    markdown = "markdown"
    pdf = "pdf"


class ReviewStatus(str, Enum):
    unreviewed = "unreviewed"
    verified = "verified"
    flagged = "flagged"


FORMAT_EXTENSIONS = {
    SourceFormat.plain_text: "txt",
    SourceFormat.markdown: "md",
    SourceFormat.pdf: "pdf",
}
EXTENSION_FORMATS = {v: k for k, v in FORMAT_EXTENSIONS.items()}


def content_hash(raw: bytes) -> str:
    """Collision-resistant digest of the stored body bytes (lowercase hex)."""
    return hashlib.sha256(raw).hexdigest()


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    """RFC 3339 UTC with microseconds, e.g. 2025-01-01T12:00:00.000000Z."""
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


def parse_timestamp(raw: str) -> datetime:
    return datetime.strptime(raw, "%Y-%m-%dT%H:%M:%S.%fZ").replace(tzinfo=timezone.utc)


@dataclass
class PaperRecord:
    """One archived paper: identity, metadata, extracted text and review state."""

    paper_id: str
    title: str
    authors: list[str]
    abstract: str
    body_text: str
    source_format: SourceFormat
    lab_id: str | None
    uploaded_at: datetime
    content_hash: str
    review_status: ReviewStatus = ReviewStatus.unreviewed
    review_note: str | None = None
    # Raw body bytes as stored on disk; not part of record identity.
    source_bytes: bytes = field(default=b"", compare=False, repr=False)

    def with_review(self, status: ReviewStatus, note: str | None) -> "PaperRecord":
        return replace(self, review_status=status, review_note=note)

    def to_dict(self) -> dict:
        return {
            "paper_id": self.paper_id,
            "title": self.title,
            "authors": list(self.authors),
            "abstract": self.abstract,
            "body_text": self.body_text,
            "source_format": self.source_format.value,
            "lab_id": self.lab_id,
            "uploaded_at": format_timestamp(self.uploaded_at),
            "content_hash": self.content_hash,
            "review_status": self.review_status.value,
            "review_note": self.review_note,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PaperRecord":
        return cls(
            paper_id=data["paper_id"],
            title=data["title"],
            authors=list(data["authors"]),
            abstract=data["abstract"],
            body_text=data["body_text"],
            source_format=SourceFormat(data["source_format"]),
            lab_id=data.get("lab_id"),
            uploaded_at=parse_timestamp(data["uploaded_at"]),
            content_hash=data["content_hash"],
            review_status=ReviewStatus(data.get("review_status", "unreviewed")),
            review_note=data.get("review_note"),
        )


@dataclass
class SyncReport:
    """Outcome of one file/index reconciliation pass."""

    added: int = 0
    removed: int = 0
    unchanged: int = 0
    reindexed: int = 0
    duration: float = 0.0
    failures: list[str] = field(default_factory=list)

    @property
    def decisions(self) -> int:
        return self.added + self.removed + self.unchanged + self.reindexed
