"""Completion and embedding providers behind one contract.

Two implementations: a remote client speaking the de facto chat-completions
HTTP schema, and a fully deterministic mock whose completions replay from
digest-keyed fixtures and whose embeddings come from a token-hash rule.
Everything downstream is testable against the mock without network access.
"""

from __future__ import annotations

import hashlib
import logging
import math
import os
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Sequence

import httpx
import yaml

from .errors import AuthError, DimensionMismatch, EmbedderFailure, FixtureMiss, ProviderFailure, RateLimited

logger = logging.getLogger(__name__)

DEFAULT_MOCK_DIMENSION = 256

_FNV_OFFSET = 14695981039346656037
_FNV_PRIME = 1099511628211
_U64 = 2**64


class ProviderKind(Enum):
    REMOTE_API = "remote_api"
    MOCK_REPLAY = "mock_replay"


@dataclass
class PromptSpec:
    """One completion request; the rendered prompt is a pure function of fields."""

    user_text: str
    system_text: str | None = None
    temperature: float = 0.0
    max_output: int | None = None
    model_name: str = "default"

    def __post_init__(self):
        if not self.user_text:
            raise ValueError("user_text must be non-empty")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")

    def rendered(self) -> str:
        if self.system_text:
            return f"{self.system_text}\n\n{self.user_text}"
        return self.user_text


@dataclass
class CompletionResult:
    text: str
    model_name: str
    finished: bool = True


@dataclass
class RetryPolicy:
    max_attempts: int = 3
    base_backoff: float = 0.5


@dataclass
class ProviderConfig:
    kind: ProviderKind = ProviderKind.MOCK_REPLAY
    endpoint: str | None = None
    api_key_env: str = "CURATION_LLM_API_KEY"
    model_name: str = "default"
    embed_dimension: int = DEFAULT_MOCK_DIMENSION
    retry: RetryPolicy = field(default_factory=RetryPolicy)
    max_in_flight: int = 4
    fixtures_path: str | None = None
    strict_fixtures: bool = True

    def __post_init__(self):
        if self.kind is ProviderKind.REMOTE_API and not self.endpoint:
            raise ValueError("REMOTE_API provider requires an endpoint")


def prompt_digest(prompt: str) -> str:
    """Stable fixture key for a rendered prompt."""
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:16]


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) % _U64
    return h


def mock_embed_rule(text: str, dimension: int = DEFAULT_MOCK_DIMENSION) -> list[float]:
    """Deterministic bag-of-hashed-tokens embedding, unit-normalized.

    Each token bumps two buckets chosen by its FNV-1a digest; an input with
    no tokens maps to the first basis vector so the result is never zero.
    """
    counts = [0.0] * dimension
    token = []
    tokens = []
    for ch in text.lower():
        if ch.isalnum():
            token.append(ch)
        elif token:
            tokens.append("".join(token))
            token = []
    if token:
        tokens.append("".join(token))
    if not tokens:
        vec = [0.0] * dimension
        vec[0] = 1.0
        return vec
    for tok in tokens:
        digest = fnv1a64(tok.encode("utf-8"))
        counts[digest % dimension] += 1.0
        counts[(digest // dimension) % dimension] += 1.0
    norm = math.sqrt(sum(c * c for c in counts))
    return [c / norm for c in counts]


def load_completion_fixtures(path: str | Path) -> dict[str, str]:
    """Read a ``completions.yaml`` digest -> completion-text mapping."""
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ValueError(f"fixture file {path} must hold a mapping")
    return {str(k): str(v) for k, v in data.items()}


def save_completion_fixtures(path: str | Path, fixtures: dict[str, str]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(dict(sorted(fixtures.items())), fh, allow_unicode=True, width=2**16)


class MockProvider:
    """Deterministic provider: fixture-replayed completions, hashed embeddings.

    ``strict`` mode raises FixtureMiss for unknown prompts, which is how the
    test suite detects scenario gaps. Non-strict mode falls back to
    ``responder`` (default: echo the user text). Every call lands in an
    append-only log queryable by tests.
    """

    def __init__(
        self,
        fixtures: dict[str, str] | None = None,
        *,
        dimension: int = DEFAULT_MOCK_DIMENSION,
        strict: bool = False,
        responder: Callable[[PromptSpec], str] | None = None,
        model_name: str = "mock",
    ):
        self.fixtures = dict(fixtures or {})
        self.dimension = dimension
        self.strict = strict
        self.responder = responder
        self.model_name = model_name
        self.embedding_model_name = f"mock-fnv1a-{dimension}"
        self.call_log: list[tuple] = []

    @classmethod
    def from_config(cls, config: ProviderConfig) -> "MockProvider":
        fixtures = {}
        if config.fixtures_path and Path(config.fixtures_path).exists():
            fixtures = load_completion_fixtures(config.fixtures_path)
        return cls(
            fixtures,
            dimension=config.embed_dimension,
            strict=config.strict_fixtures,
            model_name=config.model_name,
        )

    def complete(self, spec: PromptSpec) -> CompletionResult:
        digest = prompt_digest(spec.rendered())
        self.call_log.append(("complete", digest))
        if digest in self.fixtures:
            text = self.fixtures[digest]
        elif self.responder is not None:
            text = self.responder(spec)
        elif self.strict:
            raise FixtureMiss(
                f"no completion fixture for prompt digest {digest}",
                detail={"digest": digest, "prompt_head": spec.rendered()[:200]},
            )
        else:
            text = spec.user_text
        finished = True
        if spec.max_output is not None and len(text) > spec.max_output:
            text = text[: spec.max_output]
            finished = False
        return CompletionResult(text=text, model_name=self.model_name, finished=finished)

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        if not texts:
            raise EmbedderFailure("embed requires a non-empty list of texts")
        for t in texts:
            if not t.strip():
                raise EmbedderFailure("embed input texts must be non-empty")
        self.call_log.append(("embed", len(texts)))
        return [mock_embed_rule(t, self.dimension) for t in texts]

    # -- test helpers ------------------------------------------------------

    def embedded_text_count(self) -> int:
        return sum(n for kind, n in self.call_log if kind == "embed")

    def completion_count(self) -> int:
        return sum(1 for entry in self.call_log if entry[0] == "complete")


class RecordingProvider:
    """Wraps a scripted responder and collects digest->completion fixtures.

    Used to regenerate ``fixtures/completions.yaml``: run a scenario once
    against scripted replies, then dump the recorded mapping for strict replay.
    """

    def __init__(self, script: Sequence[str], *, dimension: int = DEFAULT_MOCK_DIMENSION):
        self._script = list(script)
        self._cursor = 0
        self.recorded: dict[str, str] = {}
        self._mock = MockProvider(dimension=dimension, responder=self._next)
        self.dimension = dimension
        self.model_name = self._mock.model_name
        self.embedding_model_name = self._mock.embedding_model_name

    def _next(self, spec: PromptSpec) -> str:
        if self._cursor >= len(self._script):
            raise FixtureMiss(
                f"scripted provider exhausted after {len(self._script)} completions",
                detail={"prompt_head": spec.rendered()[:200]},
            )
        text = self._script[self._cursor]
        self._cursor += 1
        self.recorded[prompt_digest(spec.rendered())] = text
        return text

    def complete(self, spec: PromptSpec) -> CompletionResult:
        return self._mock.complete(spec)

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        return self._mock.embed(texts)

    @property
    def call_log(self) -> list[tuple]:
        return self._mock.call_log

    def completion_count(self) -> int:
        return self._mock.completion_count()


class RemoteProvider:
    """Chat-completions style HTTP client with retries and a request cap.

    Transient failures (429, 5xx, connection errors) are retried with
    exponential backoff; authentication failures are terminal on first sight.
    """

    def __init__(
        self,
        config: ProviderConfig,
        *,
        client: httpx.Client | None = None,
        sleeper: Callable[[float], None] = time.sleep,
    ):
        if config.kind is not ProviderKind.REMOTE_API:
            raise ValueError("RemoteProvider requires a REMOTE_API config")
        self.config = config
        self.model_name = config.model_name
        self.embedding_model_name = config.model_name + "-embed"
        self._client = client or httpx.Client(timeout=60.0)
        self._sleeper = sleeper
        self._slots = threading.Semaphore(config.max_in_flight)

    def _headers(self) -> dict[str, str]:
        key = os.environ.get(self.config.api_key_env, "")
        return {"Authorization": f"Bearer {key}", "Content-Type": "application/json"}

    def _post(self, path: str, body: dict) -> dict:
        policy = self.config.retry
        url = self.config.endpoint.rstrip("/") + path
        last_status = None
        for attempt in range(policy.max_attempts):
            if attempt:
                self._sleeper(policy.base_backoff * (2 ** (attempt - 1)))
            try:
                with self._slots:
                    response = self._client.post(url, json=body, headers=self._headers())
            except httpx.HTTPError as exc:
                last_status = None
                logger.warning("provider request failed (%s), attempt %d", exc, attempt + 1)
                continue
            if response.status_code in (401, 403):
                raise AuthError(f"provider rejected credentials ({response.status_code})")
            if response.status_code == 429 or response.status_code >= 500:
                last_status = response.status_code
                continue
            if response.status_code >= 400:
                raise ProviderFailure(
                    f"provider error {response.status_code}",
                    detail={"body": response.text[:500]},
                )
            return response.json()
        if last_status == 429:
            raise RateLimited(f"rate limited after {policy.max_attempts} attempts")
        raise ProviderFailure(f"provider unavailable after {policy.max_attempts} attempts")

    def complete(self, spec: PromptSpec) -> CompletionResult:
        messages = []
        if spec.system_text:
            messages.append({"role": "system", "content": spec.system_text})
        messages.append({"role": "user", "content": spec.user_text})
        body: dict = {
            "model": spec.model_name if spec.model_name != "default" else self.model_name,
            "messages": messages,
            "temperature": spec.temperature,
        }
        if spec.max_output is not None:
            body["max_tokens"] = spec.max_output
        data = self._post("/chat/completions", body)
        try:
            choice = data["choices"][0]
            text = choice["message"]["content"]
            finished = choice.get("finish_reason", "stop") != "length"
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderFailure(f"malformed completion response: {exc}")
        return CompletionResult(text=text, model_name=body["model"], finished=finished)

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        if not texts:
            raise EmbedderFailure("embed requires a non-empty list of texts")
        for t in texts:
            if not t.strip():
                raise EmbedderFailure("embed input texts must be non-empty")
        try:
            data = self._post("/embeddings", {"model": self.embedding_model_name, "input": list(texts)})
            rows = [item["embedding"] for item in data["data"]]
        except ProviderFailure:
            raise
        except (KeyError, TypeError) as exc:
            raise EmbedderFailure(f"malformed embedding response: {exc}")
        if len(rows) != len(texts):
            raise EmbedderFailure(f"expected {len(texts)} embeddings, got {len(rows)}")
        lengths = {len(r) for r in rows}
        if len(lengths) > 1:
            raise DimensionMismatch(f"embedder returned mixed dimensions {sorted(lengths)}")
        return [list(map(float, r)) for r in rows]


def make_provider(config: ProviderConfig):
    if config.kind is ProviderKind.MOCK_REPLAY:
        return MockProvider.from_config(config)
    return RemoteProvider(config)
