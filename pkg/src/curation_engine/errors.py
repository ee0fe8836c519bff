"""Exception hierarchy shared by the store, providers, sources, and agents.

Every error carries a stable ``code`` used in CLI output and HTTP error
payloads, plus an optional ``detail`` mapping with context for callers.
"""

from __future__ import annotations

from typing import Any


class CurationError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "curation_error"

    def __init__(self, message: str, detail: dict[str, Any] | None = None):
        super().__init__(message)
        self.message = message
        self.detail = detail or {}

    def payload(self) -> dict[str, Any]:
        return {"error_code": self.code, "message": self.message, "detail": self.detail}


# --- store ---------------------------------------------------------------

class DuplicateInBatch(CurationError):
    code = "duplicate_in_batch"


class DimensionMismatch(CurationError):
    code = "dimension_mismatch"


class ZeroVector(CurationError):
    code = "zero_vector"


class EmptyCollection(CurationError):
    code = "empty_collection"


class StaleIndex(CurationError):
    code = "stale_index"


class EmptyCandidates(CurationError):
    code = "empty_candidates"


class InsufficientData(CurationError):
    code = "insufficient_data"


class CorruptBundle(CurationError):
    code = "corrupt_bundle"


class UnsupportedVersion(CurationError):
    code = "unsupported_version"


class StoreBusy(CurationError):
    code = "store_busy"


class DuplicateId(CurationError):
    code = "duplicate_id"


class UnknownCollection(CurationError):
    code = "unknown_collection"


# --- providers -----------------------------------------------------------

class ProviderFailure(CurationError):
    code = "provider_failure"


class EmbedderFailure(ProviderFailure):
    code = "embedder_failure"


class AuthError(ProviderFailure):
    code = "auth_error"


class RateLimited(ProviderFailure):
    code = "rate_limited"


class FixtureMiss(ProviderFailure):
    code = "fixture_miss"


# --- sources -------------------------------------------------------------

class HttpError(CurationError):
    code = "http_error"


class ParseError(CurationError):
    code = "parse_error"


class MissingField(CurationError):
    code = "missing_field"


# --- agents --------------------------------------------------------------

class Unparseable(CurationError):
    code = "unparseable"


class EmptyContext(CurationError):
    code = "empty_context"


class NoLabelNoId(CurationError):
    code = "no_label_no_id"


class EmptyAfterNormalization(CurationError):
    code = "empty_after_normalization"


class InvalidSchema(CurationError):
    code = "invalid_schema"


class StrategyPrecondition(CurationError):
    code = "strategy_precondition"


# --- app interface -------------------------------------------------------

class UnknownObject(CurationError):
    code = "unknown_object"


class UnknownAgent(CurationError):
    code = "unknown_agent"
