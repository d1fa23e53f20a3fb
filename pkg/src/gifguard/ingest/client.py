"""Search client for a GIPHY-compatible GIF API.

The client is transport-agnostic: ``LiveTransport`` talks HTTP with
``requests``, ``FixtureTransport`` replays responses recorded on disk so the
whole pipeline runs offline. Retries follow the shared contract: exponential
backoff with jitter, at most 5 attempts, and rate-limit responses always
retried after the server-indicated delay.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Protocol

import requests

from ..errors import (
    AuthRejectedError,
    IngestError,
    RateLimitedError,
    TransientNetworkError,
)
from .records import GifRecord, HashtagSeed

logger = logging.getLogger(__name__)

SEARCH_ENDPOINT = "https://api.giphy.com/v1/gifs/search"
MAX_ATTEMPTS = 5
PAGE_SIZE = 50


class Transport(Protocol):
    def search(self, query: str, offset: int, limit: int, api_key: str) -> dict: ...

    def fetch_media(self, url: str) -> bytes: ...


class TokenBucket:
    """Thread-safe token bucket; ``acquire`` blocks until a token is free."""

    def __init__(self, rate_per_sec: float, capacity: int,
                 clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep):
        self.rate = float(rate_per_sec)
        self.capacity = float(capacity)
        self._tokens = float(capacity)
        self._clock = clock
        self._sleep = sleep
        self._last = clock()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = self._clock()
                self._tokens = min(self.capacity, self._tokens + (now - self._last) * self.rate)
                self._last = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                wait = (1.0 - self._tokens) / self.rate
            self._sleep(wait)


class LiveTransport:
    def __init__(self, session: requests.Session | None = None, timeout: float = 30.0):
        self.session = session or requests.Session()
        self.timeout = timeout

    def _raise_for(self, resp: requests.Response) -> None:
        if resp.status_code in (401, 403):
            raise AuthRejectedError(f"API key rejected (HTTP {resp.status_code})")
        if resp.status_code == 429:
            retry_after = resp.headers.get("Retry-After")
            raise RateLimitedError(
                "rate limited by server",
                retry_after=float(retry_after) if retry_after else None,
            )
        if resp.status_code >= 500:
            raise TransientNetworkError(f"server error HTTP {resp.status_code}")
        resp.raise_for_status()

    def search(self, query: str, offset: int, limit: int, api_key: str) -> dict:
        try:
            resp = self.session.get(
                SEARCH_ENDPOINT,
                params={"api_key": api_key, "q": query, "offset": offset, "limit": limit},
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise TransientNetworkError(str(exc)) from exc
        self._raise_for(resp)
        return resp.json()

    def fetch_media(self, url: str) -> bytes:
        try:
            resp = self.session.get(url, timeout=self.timeout)
        except requests.RequestException as exc:
            raise TransientNetworkError(str(exc)) from exc
        self._raise_for(resp)
        return resp.content


def media_fixture_name(url: str) -> str:
    return hashlib.sha1(url.encode("utf-8")).hexdigest() + ".gif"


class FixtureTransport:
    """Replays API responses from ``<root>/search/<query>/offset_<n>.json``
    and media from ``<root>/media/<sha1(url)>.gif``."""

    def __init__(self, root: Path):
        self.root = Path(root)

    def search_fixture_path(self, query: str, offset: int) -> Path:
        return self.root / "search" / query / f"offset_{offset}.json"

    def media_fixture_path(self, url: str) -> Path:
        return self.root / "media" / media_fixture_name(url)

    def search(self, query: str, offset: int, limit: int, api_key: str) -> dict:
        path = self.search_fixture_path(query, offset)
        if not path.exists():
            # Past the recorded pages: report an empty page, mirroring API
            # exhaustion rather than erroring out.
            return {"data": [], "pagination": {"count": 0, "offset": offset, "total_count": offset}}
        return json.loads(path.read_text(encoding="utf-8"))

    def fetch_media(self, url: str) -> bytes:
        path = self.media_fixture_path(url)
        if not path.exists():
            raise TransientNetworkError(f"no media fixture for {url}")
        return path.read_bytes()


def with_retries(fn: Callable[[], dict | bytes], *,
                 max_attempts: int = MAX_ATTEMPTS,
                 backoff_base: float = 0.5,
                 sleep: Callable[[float], None] = time.sleep,
                 rng: random.Random | None = None):
    """Run ``fn`` under the retry contract and return its result."""
    rng = rng or random.Random()
    last: Exception | None = None
    for attempt in range(max_attempts):
        try:
            return fn()
        except RateLimitedError as exc:
            last = exc
            delay = exc.retry_after if exc.retry_after is not None else backoff_base * 2 ** attempt
            logger.warning("rate limited; sleeping %.2fs (attempt %d)", delay, attempt + 1)
            sleep(delay)
        except TransientNetworkError as exc:
            last = exc
            delay = backoff_base * 2 ** attempt * (1.0 + rng.random())
            logger.warning("transient failure %s; retrying in %.2fs", exc, delay)
            sleep(delay)
    raise IngestError(f"giving up after {max_attempts} attempts: {last}")


def _parse_gif(entry: dict, seed: HashtagSeed) -> GifRecord:
    url = entry.get("images", {}).get("original", {}).get("url") or entry.get("url", "")
    return GifRecord(
        id=str(entry["id"]),
        source_url=url,
        tag=seed.tag,
        query_label=seed.query_label,
    )


@dataclass
class SearchClient:
    transport: Transport
    api_key: str
    rate_limiter: TokenBucket | None = None
    sleep: Callable[[float], None] = time.sleep
    rng: random.Random = field(default_factory=random.Random)

    def __post_init__(self):
        if not self.api_key:
            raise IngestError("API key must be non-empty")

    def _call(self, query: str, offset: int, page_size: int) -> dict:
        if self.rate_limiter is not None:
            self.rate_limiter.acquire()
        return with_retries(
            lambda: self.transport.search(query, offset, page_size, self.api_key),
            sleep=self.sleep,
            rng=self.rng,
        )

    def search_gifs(self, seed: HashtagSeed, limit: int) -> list[GifRecord]:
        """Page through results for one seed, stopping at ``limit`` or
        exhaustion. Records carry the seed's tag and label; media is not
        fetched here."""
        if limit < 0:
            raise IngestError("limit must be >= 0")
        records: list[GifRecord] = []
        offset = 0
        while len(records) < limit:
            page_size = min(PAGE_SIZE, limit - len(records))
            payload = self._call(seed.tag, offset, page_size)
            data = payload.get("data", [])
            if not data:
                break
            for entry in data:
                if len(records) >= limit:
                    break
                records.append(_parse_gif(entry, seed))
            offset += len(data)
            total = payload.get("pagination", {}).get("total_count")
            if total is not None and offset >= int(total):
                break
        return records

    def fetch_media(self, url: str) -> bytes:
        if self.rate_limiter is not None:
            self.rate_limiter.acquire()
        return with_retries(
            lambda: self.transport.fetch_media(url), sleep=self.sleep, rng=self.rng
        )
