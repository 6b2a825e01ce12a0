"""Document ingestion: text extraction and metadata rules.

Title resolution order for text formats: explicit hint, then a leading
front-matter block (``---``-delimited ``key: value`` lines with keys
title/authors/abstract), then the first non-blank line.  The abstract is the
front-matter abstract, else the first paragraph after the title line.
``body_text`` is the full decoded text, so downstream consumers (e.g. the
swarm harness reading scores out of front-matter) see the document verbatim.
"""

from __future__ import annotations

import uuid
from typing import Callable

from .errors import EmptyDocument, MalformedFrontMatter, UnsupportedFormat
from .records import PaperRecord, ReviewStatus, SourceFormat, content_hash, utc_now

# bytes -> extracted plain text; pluggable so PDF support stays optional
PdfExtractor = Callable[[bytes], str]


def parse_front_matter(text: str) -> tuple[dict[str, str], str]:
    """Parse a leading ``---`` block into a key/value dict.

    Returns (metadata, remainder-after-block).  If the text does not open
    with a front-matter fence, returns ({}, text).  Raises
    MalformedFrontMatter if the fence opens but never closes.
    """
    lines = text.split("\n")
    # skip leading blank lines
    start = 0
    while start < len(lines) and not lines[start].strip():
        start += 1
    if start >= len(lines) or lines[start].strip() != "---":
        return {}, text
    meta: dict[str, str] = {}
    for i in range(start + 1, len(lines)):
        line = lines[i]
        if line.strip() == "---":
            remainder = "\n".join(lines[i + 1 :])
            return meta, remainder
        if ":" in line:
            key, _, value = line.partition(":")
            meta[key.strip().lower()] = value.strip()
    raise MalformedFrontMatter("front-matter block opened but not closed")


def _parse_authors(raw: str) -> list[str]:
    raw = raw.strip().strip("[]")
    return [a.strip() for a in raw.split(",") if a.strip()]


def _first_nonblank_line(text: str) -> tuple[str, int]:
    lines = text.split("\n")
    for i, line in enumerate(lines):
        if line.strip():
            return line.strip().lstrip("# ").strip(), i
    return "", -1


def _first_paragraph_after(text: str, line_index: int) -> str:
    """First block of consecutive non-blank lines after the given line."""
    lines = text.split("\n")
    i = line_index + 1
    while i < len(lines) and not lines[i].strip():
        i += 1
    para: list[str] = []
    while i < len(lines) and lines[i].strip():
        para.append(lines[i].strip())
        i += 1
    return " ".join(para)


def ingest_document(
    raw: bytes,
    source_format: SourceFormat,
    hint: dict | None = None,
    pdf_extractor: PdfExtractor | None = None,
) -> PaperRecord:
    """Extract text and basic metadata from a document, returning a new record.

    ``hint`` may carry explicit title/authors/abstract which take precedence
    over anything extracted from the content.
    """
    hint = hint or {}
    if not raw:
        raise EmptyDocument("document is empty")
    source_format = SourceFormat(source_format)

    if source_format is SourceFormat.pdf:
        if pdf_extractor is None:
            raise UnsupportedFormat("no PDF extractor configured")
        text = pdf_extractor(raw)
    else:
        text = raw.decode("utf-8")

    if not text.strip():
        raise EmptyDocument("no extractable text")

    meta, remainder = parse_front_matter(text)

    title = hint.get("title") or meta.get("title") or ""
    first_line, first_idx = _first_nonblank_line(remainder)
    if not title:
        title = first_line

    abstract = hint.get("abstract") or meta.get("abstract") or ""
    if not abstract and first_idx >= 0:
        # paragraph following the title line (or leading paragraph when the
        # title came from metadata rather than the text itself)
        anchor = first_idx if title == first_line else first_idx - 1
        abstract = _first_paragraph_after(remainder, anchor)

    authors = hint.get("authors")
    if authors is None:
        authors = _parse_authors(meta.get("authors", ""))

    return PaperRecord(
        paper_id=uuid.uuid4().hex,
        title=title,
        authors=list(authors),
        abstract=abstract,
        body_text=text,
        source_format=source_format,
        lab_id=hint.get("lab_id"),
        uploaded_at=utc_now(),
        content_hash=content_hash(raw),
        review_status=ReviewStatus.unreviewed,
        source_bytes=raw,
    )
