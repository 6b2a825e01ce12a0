"""Exception types shared across the archive, retrieval, client and engine layers."""


class ArchiveError(Exception):
    """Base class for all errors raised by this package."""


class EmptyDocument(ArchiveError):
    """Ingestion found no extractable text."""


class UnsupportedFormat(ArchiveError):
    """Document format cannot be handled (e.g. PDF with no extractor configured)."""


class MalformedFrontMatter(ArchiveError):
    """A front-matter block was opened with '---' but never closed."""


class StorageFailure(ArchiveError):
    """A disk or index write failed; no partial state remains."""


class NotFound(ArchiveError):
    """The requested paper does not exist."""


class DimensionMismatch(ArchiveError):
    """Two vectors of different dimension were compared."""


class ServerUnreachable(ArchiveError):
    """The archive server could not be reached after all retries."""


class ValidationRejected(ArchiveError):
    """The server rejected the request with a 4xx status; not retried."""


class ProviderFailure(ArchiveError):
    """A completion provider failed after retries."""
