"""Walk through the archive: ingest documents, search, flag one, search again.

Run:  python3 demos/archive_walkthrough.py
"""

import tempfile
from pathlib import Path

from agentrxiv import ArchiveStore, Searcher, SearchQuery, SourceFormat, ingest_document

DOCS = [
    b"Calibrated Retrieval Gating\n\nWe rank archived reports by cosine "
    b"similarity and gate low-confidence hits behind a calibrated threshold.",
    b"Ensemble Prompt Reweighting\n\nA study of reweighting prompt ensembles "
    b"using token-level entropy as the mixing signal.",
    b"---\ntitle: Divergence Aware Sampling\nscore: 0.731\n---\n"
    b"# Divergence Aware Sampling\n\nDual samples are reconciled whenever "
    b"their reasoning chains diverge beyond a calibrated threshold.",
]


def main() -> None:
    data_dir = Path(tempfile.mkdtemp(prefix="archive-demo-"))
    store = ArchiveStore(data_dir)

    ids = []
    for raw in DOCS:
        fmt = SourceFormat.markdown if raw.startswith(b"---") else SourceFormat.plain_text
        ids.append(store.store_paper(ingest_document(raw, fmt)))
    print(f"stored {store.paper_count} papers under {data_dir}")

    searcher = Searcher(store)
    for hit in searcher.search(SearchQuery(text="divergence threshold sampling", k=3)):
        print(f"  rank {hit.rank}  sim {hit.similarity:.4f}  {hit.title}")

    flagged = ids[2]
    store.set_review_status(flagged, "flagged", note="needs manual verification")
    print(f"\nflagged {flagged}; searching again with exclude_flagged:")
    for hit in searcher.search(
        SearchQuery(text="divergence threshold sampling", k=3, exclude_flagged=True)
    ):
        print(f"  rank {hit.rank}  sim {hit.similarity:.4f}  {hit.title}")

    report = store.sync_store()
    print(f"\nsync: added={report.added} removed={report.removed} unchanged={report.unchanged}")


if __name__ == "__main__":
    main()
