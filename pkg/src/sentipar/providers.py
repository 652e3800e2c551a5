"""Pluggable translation providers with an on-disk cache and request pacing.

The real service behind the corpus is configuration, not code: the HTTP
provider takes a URL template and auth token.  Tests and offline runs use
the dictionary provider.
"""

from __future__ import annotations

import json
import os
import threading
import time
from typing import Protocol

import requests

from .errors import ProviderError


class TranslationProvider(Protocol):
    def translate(self, text: str) -> str: ...


class DictionaryProvider:
    """Offline provider backed by an exact-match source->target mapping."""

    def __init__(self, mapping: dict[str, str]):
        self.mapping = dict(mapping)

    @classmethod
    def from_tsv(cls, path) -> "DictionaryProvider":
        mapping = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                source, _, target = line.rstrip("\n").partition("\t")
                mapping[source] = target
        return cls(mapping)

    def translate(self, text: str) -> str:
        try:
            return self.mapping[text]
        except KeyError:
            raise ProviderError(f"no dictionary entry for {text!r}") from None


class HttpProvider:
    """Generic HTTP translation client.

    ``url_template`` must contain ``{text}``; the response is JSON and the
    translation is read from ``response_key``.
    """

    def __init__(
        self,
        url_template: str,
        auth_token: str | None = None,
        response_key: str = "translation",
        timeout: float = 10.0,
        session: requests.Session | None = None,
    ):
        if "{text}" not in url_template:
            raise ValueError("url_template must contain a {text} placeholder")
        self.url_template = url_template
        self.auth_token = auth_token
        self.response_key = response_key
        self.timeout = timeout
        self.session = session or requests.Session()

    def translate(self, text: str) -> str:
        url = self.url_template.format(text=requests.utils.quote(text))
        headers = {}
        if self.auth_token:
            headers["Authorization"] = f"Bearer {self.auth_token}"
        try:
            response = self.session.get(url, headers=headers, timeout=self.timeout)
            response.raise_for_status()
            payload = response.json()
        except (requests.RequestException, ValueError) as exc:
            raise ProviderError(f"translation request failed: {exc}") from exc
        if self.response_key not in payload:
            raise ProviderError(
                f"response lacks key {self.response_key!r}: {payload!r}"
            )
        return str(payload[self.response_key])


class RateLimiter:
    """Enforces a minimum interval between calls.  0 disables pacing."""

    def __init__(self, calls_per_second: float = 0.0, clock=time.monotonic, sleep=time.sleep):
        self.interval = 1.0 / calls_per_second if calls_per_second > 0 else 0.0
        self._clock = clock
        self._sleep = sleep
        self._last: float | None = None
        self._lock = threading.Lock()

    def wait(self) -> None:
        if not self.interval:
            return
        with self._lock:
            now = self._clock()
            if self._last is not None:
                remaining = self._last + self.interval - now
                if remaining > 0:
                    self._sleep(remaining)
                    now = self._clock()
            self._last = now


class TranslationCache:
    """Disk-backed source-text -> translation cache (JSON file).

    Reads are lock-free after load; writes are serialized and flushed through
    an atomic rename so rerunning a pipeline never re-queries the provider.
    """

    def __init__(self, path):
        self.path = str(path)
        self._lock = threading.Lock()
        self._entries: dict[str, str] = {}
        if os.path.exists(self.path):
            with open(self.path, encoding="utf-8") as fh:
                self._entries = json.load(fh)

    def get(self, text: str) -> str | None:
        return self._entries.get(text)

    def put(self, text: str, translation: str) -> None:
        with self._lock:
            self._entries[text] = translation

    def flush(self) -> None:
        with self._lock:
            tmp = self.path + ".tmp"
            with open(tmp, "w", encoding="utf-8") as fh:
                json.dump(self._entries, fh, ensure_ascii=False, indent=0, sort_keys=True)
            os.replace(tmp, self.path)

    def __len__(self) -> int:
        return len(self._entries)


class CachingTranslator:
    """Provider wrapper adding cache lookups, pacing, and bounded retries."""

    def __init__(
        self,
        provider: TranslationProvider,
        cache: TranslationCache | None = None,
        limiter: RateLimiter | None = None,
        retries: int = 2,
    ):
        self.provider = provider
        self.cache = cache
        self.limiter = limiter or RateLimiter()
        self.retries = retries

    def translate(self, text: str) -> str:
        if self.cache is not None:
            hit = self.cache.get(text)
            if hit is not None:
                return hit
        last_error: Exception | None = None
        for _ in range(self.retries + 1):
            self.limiter.wait()
            try:
                translation = self.provider.translate(text)
                break
            except ProviderError as exc:
                last_error = exc
        else:
            raise ProviderError(
                f"provider failed after {self.retries + 1} attempts: {last_error}"
            )
        if self.cache is not None:
            self.cache.put(text, translation)
        return translation
