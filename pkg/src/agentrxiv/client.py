"""SDK used by a laboratory to review literature and publish reports.

Talks only the archive's JSON protocol.  Transient server errors are retried
with exponential backoff; uploads carry a client-generated idempotency token
so a retried upload can never double-publish.
"""

from __future__ import annotations

import json
import time
import uuid
from dataclasses import dataclass, field
from importlib import resources
from typing import Protocol

import httpx

from .errors import ServerUnreachable, ValidationRejected


@dataclass
class LabClientConfig:
    server_url: str
    lab_id: str
    n_rxiv: int = 5
    n_external: int = 5
    retry_limit: int = 3
    retry_backoff: float = 1.0  # seconds; doubles per attempt
    exclude_own_papers: bool = False

    def __post_init__(self):
        if self.n_rxiv < 0 or self.n_external < 0 or self.retry_limit < 0:
            raise ValueError("n_rxiv, n_external and retry_limit must be >= 0")


@dataclass
class ReviewBundle:
    query: str
    rxiv_papers: list[dict]  # search hit fields plus "body"
    external_papers: list[dict]  # {title, abstract}
    external_warning: bool = False


class ExternalCorpus(Protocol):
    """Pluggable external literature source: query -> list of {title, abstract}."""

    def search(self, query: str, k: int) -> list[dict]: ...


class FixtureCorpus:
    """Offline external corpus bundled with the package, so tests and CI
    never touch the public internet.  Ranks fixtures by token overlap."""

    def __init__(self):
        raw = resources.files("agentrxiv.data").joinpath("external_corpus.json")
        self.entries: list[dict] = json.loads(raw.read_text(encoding="utf-8"))

    def search(self, query: str, k: int) -> list[dict]:
        terms = set(query.lower().split())

        def overlap(entry: dict) -> int:
            text = f"{entry['title']} {entry['abstract']}".lower()
            return sum(1 for t in terms if t in text)

        ranked = sorted(self.entries, key=lambda e: (-overlap(e), e["title"]))
        return [dict(e) for e in ranked[:k]]


class LabClient:
    """One instance per laboratory; used serially by its laboratory."""

    def __init__(
        self,
        config: LabClientConfig,
        external: ExternalCorpus | None = None,
        transport: httpx.BaseTransport | None = None,
    ):
        self.config = config
        self.external = external if external is not None else FixtureCorpus()
        self._http = httpx.Client(
            base_url=config.server_url, timeout=30.0, transport=transport
        )

    # -- transport with retry ------------------------------------------

    def _request(self, method: str, path: str, **kwargs) -> httpx.Response:
        attempts = self.config.retry_limit + 1
        last_error: Exception | None = None
        for attempt in range(1, attempts + 1):
            try:
                resp = self._http.request(method, path, **kwargs)
            except httpx.HTTPError as exc:
                last_error = exc
            else:
                if resp.status_code < 500:
                    if 400 <= resp.status_code:
                        raise ValidationRejected(
                            f"{resp.status_code}: {resp.text[:200]}"
                        )
                    return resp
                last_error = ServerUnreachable(f"server error {resp.status_code}")
            if attempt < attempts:
                time.sleep(self.config.retry_backoff * 2 ** (attempt - 1))
        raise ServerUnreachable(f"gave up after {attempts} attempts: {last_error}")

    # -- operations ----------------------------------------------------

    def literature_review(self, query: str) -> ReviewBundle:
        """Fetch top n_rxiv archive hits (with bodies) plus external summaries.

        With n_rxiv = 0 the archive is not contacted at all.  External source
        failures degrade to an empty list with a warning flag, never an abort.
        """
        rxiv_papers: list[dict] = []
        if self.config.n_rxiv > 0:
            params = {"q": query, "k": self.config.n_rxiv}
            if self.config.exclude_own_papers:
                params["exclude_lab"] = self.config.lab_id
            hits = self._request("GET", "/api/search", params=params).json()
            for hit in hits:
                paper = self._request("GET", f"/api/papers/{hit['paper_id']}").json()
                entry = dict(hit)
                entry["body"] = paper["body_text"]
                rxiv_papers.append(entry)

        external_papers: list[dict] = []
        warning = False
        if self.config.n_external > 0:
            try:
                external_papers = self.external.search(query, self.config.n_external)
            except Exception:
                external_papers = []
                warning = True

        return ReviewBundle(
            query=query,
            rxiv_papers=rxiv_papers,
            external_papers=external_papers,
            external_warning=warning,
        )

    def upload_paper(
        self,
        title: str,
        abstract: str,
        body: str,
        source_format: str = "markdown",
        authors: list[str] | None = None,
    ) -> str:
        """Publish a report, stamped with this laboratory's id."""
        if not body.strip():
            raise ValidationRejected("body must be non-empty")
        payload = {
            "title": title,
            "abstract": abstract,
            "body": body,
            "format": source_format,
            "authors": authors or [],
            "lab_id": self.config.lab_id,
            "idempotency_token": uuid.uuid4().hex,
        }
        resp = self._request("POST", "/api/papers", json=payload)
        return resp.json()["paper_id"]

    def close(self) -> None:
        self._http.close()
