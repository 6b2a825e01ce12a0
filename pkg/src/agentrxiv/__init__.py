"""Self-hostable preprint archive for autonomous agent laboratories, with
cosine-similarity retrieval, a dual-sampling reasoning engine, and a
multi-laboratory orchestration harness."""

from .archive import ArchiveStore
from .client import LabClient, LabClientConfig, ReviewBundle
from .embedding import HashedEmbedding, RemoteEmbedding, cosine_similarity
from .ingest import ingest_document
from .records import PaperRecord, ReviewStatus, SourceFormat, SyncReport
from .retrieval import Searcher, SearchHit, SearchQuery
from .service import create_app

__all__ = [
    "ArchiveStore",
    "LabClient",
    "LabClientConfig",
    "ReviewBundle",
    "HashedEmbedding",
    "RemoteEmbedding",
    "cosine_similarity",
    "ingest_document",
    "PaperRecord",
    "ReviewStatus",
    "SourceFormat",
    "SyncReport",
    "Searcher",
    "SearchHit",
    "SearchQuery",
    "create_app",
]

__version__ = "0.1.0"
