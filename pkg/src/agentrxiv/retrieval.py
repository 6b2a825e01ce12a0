"""Cosine-similarity ranking of archived papers against a query.

An exact brute-force linear scan: corpus sizes here are small and exactness
keeps the ranking oracle-testable.  Similarities are compared at 12 decimal
places, then ties broken by uploaded_at ascending and paper_id, so rankings
are deterministic across processes: a 1-ulp difference from floating-point
summation order must not reorder papers whose similarity is really equal.
"""

from __future__ import annotations

from dataclasses import dataclass

from .archive import ArchiveStore
from .embedding import cosine_similarity
from .records import ReviewStatus


@dataclass
class SearchQuery:
    text: str
    k: int = 5
    exclude_flagged: bool = False
    exclude_lab: str | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not self.text:
            raise ValueError("query text must be non-empty")


@dataclass
class SearchHit:
    paper_id: str
    title: str
    abstract: str
    similarity: float
    rank: int


@dataclass
class Searcher:
    """Ranks the store's indexed papers by cosine similarity to a query."""

    store: ArchiveStore

    def search(self, query: SearchQuery) -> list[SearchHit]:
        query_vec = self.store.embedder.embed(query.text)
        scored = []
        for row in self.store.snapshot_rows():
            record = row.record
            if query.exclude_flagged and record.review_status == ReviewStatus.flagged:
                continue
            if query.exclude_lab is not None and record.lab_id == query.exclude_lab:
                continue
            sim = cosine_similarity(query_vec, row.embedding)
            scored.append((sim, record))
        scored.sort(
            key=lambda item: (-round(item[0], 12), item[1].uploaded_at, item[1].paper_id)
        )
        return [
            SearchHit(
                paper_id=record.paper_id,
                title=record.title,
                abstract=record.abstract,
                similarity=sim,
                rank=i + 1,
            )
            for i, (sim, record) in enumerate(scored[: query.k])
        ]
