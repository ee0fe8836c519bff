"""HTTP fetching with retries, politeness, and recorded replay.

Live fetching obeys the NCBI guidance: at most three concurrent requests
per host and a 350 ms gap between requests to their host when no API key
is configured. Replay serves responses from a directory of recorded
exchanges keyed by a digest of the URL, so tests never touch the network.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from pathlib import Path
from typing import Callable, Protocol
from urllib.parse import urlsplit

import httpx

from ..errors import HttpError

logger = logging.getLogger(__name__)

NCBI_DELAY_SECONDS = 0.35
MAX_PER_HOST = 3
NCBI_KEY_ENV = "NCBI_API_KEY"


def url_digest(url: str) -> str:
    return hashlib.sha256(url.encode("utf-8")).hexdigest()[:16]


class HttpFetcher(Protocol):
    def fetch(self, url: str) -> str: ...


class LiveFetcher:
    """GET with retries; throttles politely per host."""

    def __init__(
        self,
        *,
        client: "httpx.Client | None" = None,
        max_attempts: int = 3,
        base_backoff: float = 0.5,
        sleeper: Callable[[float], None] = time.sleep,
        clock: Callable[[], float] = time.monotonic,
    ):
        self._client = client or httpx.Client(timeout=30.0, follow_redirects=True)
        self._max_attempts = max_attempts
        self._base_backoff = base_backoff
        self._sleeper = sleeper
        self._clock = clock
        self._host_slots: dict[str, threading.Semaphore] = {}
        self._last_request: dict[str, float] = {}
        self._lock = threading.Lock()

    def _slot(self, host: str) -> threading.Semaphore:
        with self._lock:
            if host not in self._host_slots:
                self._host_slots[host] = threading.Semaphore(MAX_PER_HOST)
            return self._host_slots[host]

    def _respect_delay(self, host: str) -> None:
        # NCBI allows faster polling only with an API key
        if "ncbi" not in host or os.environ.get(NCBI_KEY_ENV):
            return
        with self._lock:
            elapsed = self._clock() - self._last_request.get(host, float("-inf"))
            wait = NCBI_DELAY_SECONDS - elapsed
        if wait > 0:
            self._sleeper(wait)
        with self._lock:
            self._last_request[host] = self._clock()

    def fetch(self, url: str) -> str:
        host = urlsplit(url).netloc
        last_error = "unknown"
        for attempt in range(self._max_attempts):
            if attempt:
                self._sleeper(self._base_backoff * (2 ** (attempt - 1)))
            self._respect_delay(host)
            try:
                with self._slot(host):
                    response = self._client.get(url)
            except httpx.HTTPError as exc:
                last_error = str(exc)
                logger.warning("fetch failed (%s), attempt %d", exc, attempt + 1)
                continue
            if response.status_code == 429 or response.status_code >= 500:
                last_error = f"status {response.status_code}"
                continue
            if response.status_code >= 400:
                raise HttpError(f"GET {url} returned {response.status_code}")
            return response.text
        raise HttpError(f"GET {url} failed after {self._max_attempts} attempts: {last_error}")


class ReplayFetcher:
    """Serves recorded exchanges; unknown URLs are an error, not a fetch."""

    def __init__(self, directory: "str | Path"):
        self.directory = Path(directory)
        self.requested: list[str] = []

    def fetch(self, url: str) -> str:
        self.requested.append(url)
        path = self.directory / f"{url_digest(url)}.json"
        if not path.exists():
            raise HttpError(f"no recorded exchange for {url} (digest {url_digest(url)})")
        with open(path, "r", encoding="utf-8") as fh:
            exchange = json.load(fh)
        status = int(exchange.get("status", 200))
        if status >= 400:
            raise HttpError(f"GET {url} returned {status} (replayed)")
        return exchange["body"]


def record_exchange(directory: "str | Path", url: str, body: str, status: int = 200) -> Path:
    """Write one replayable exchange; used by fixture-building scripts."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{url_digest(url)}.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"url": url, "status": status, "body": body}, fh, ensure_ascii=False, indent=1)
        fh.write("\n")
    return path
