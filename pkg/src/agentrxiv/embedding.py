"""Text embedding providers.

The default provider is a deterministic hashed bag-of-features encoder so the
whole system is testable offline: lowercase, split on non-alphanumerics, hash
each token and each adjacent token bigram into ``dim`` buckets with a fixed
published seed, weight by term frequency, then L2-normalize.  A learned
sentence encoder (local model or remote service) can be substituted through
the same one-method interface without changing any caller.
"""

from __future__ import annotations

import hashlib
import re
from typing import Protocol

import numpy as np

from .errors import DimensionMismatch

DEFAULT_DIM = 384

# Published hashing seed; changing it changes every stored embedding.
HASH_SEED = b"agentrxiv-hashed-embedding-v1"

_TOKEN_RE = re.compile(r"[a-z0-9]+")


class EmbeddingProvider(Protocol):
    """One operation: text in, fixed-dimension real vector out."""

    dim: int

    def embed(self, text: str) -> np.ndarray: ...


def zero_vector(dim: int = DEFAULT_DIM) -> np.ndarray:
    """The designated all-zeros sentinel for empty text."""
    return np.zeros(dim, dtype=np.float64)


class HashedEmbedding:
    """Deterministic offline embedding provider (the default)."""

    def __init__(self, dim: int = DEFAULT_DIM, seed: bytes = HASH_SEED):
        if dim < 1:
            raise ValueError("dim must be positive")
        self.dim = dim
        self.seed = seed

    def _bucket(self, feature: str) -> int:
        digest = hashlib.blake2b(feature.encode("utf-8"), digest_size=8, key=self.seed)
        return int.from_bytes(digest.digest(), "big") % self.dim

    def embed(self, text: str) -> np.ndarray:
        tokens = _TOKEN_RE.findall(text.lower())
        if not tokens:
            return zero_vector(self.dim)
        vec = np.zeros(self.dim, dtype=np.float64)
        for tok in tokens:
            vec[self._bucket(tok)] += 1.0
        for a, b in zip(tokens, tokens[1:]):
            vec[self._bucket(a + " " + b)] += 1.0
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            return zero_vector(self.dim)
        return vec / norm


class RemoteEmbedding:
    """HTTP provider speaking {"texts": [...]} -> {"vectors": [[...], ...]}."""

    def __init__(self, url: str, dim: int = DEFAULT_DIM, timeout: float = 30.0):
        import httpx

        self.url = url
        self.dim = dim
        self._client = httpx.Client(timeout=timeout)

    def embed(self, text: str) -> np.ndarray:
        if not text.strip():
            return zero_vector(self.dim)
        resp = self._client.post(self.url, json={"texts": [text]})
        resp.raise_for_status()
        vec = np.asarray(resp.json()["vectors"][0], dtype=np.float64)
        if vec.shape != (self.dim,):
            raise DimensionMismatch(
                f"remote provider returned dim {vec.shape}, expected {self.dim}"
            )
        return vec


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """dot(a, b) / (|a| |b|), clamped to [-1, 1]; 0 if either is the zero sentinel."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"dims differ: {a.shape} vs {b.shape}")
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    sim = float(np.dot(a, b)) / (norm_a * norm_b)
    return max(-1.0, min(1.0, sim))
