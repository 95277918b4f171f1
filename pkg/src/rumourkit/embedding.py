"""Sentence-vector acquisition behind a pluggable provider boundary.

Vectors come either from a precomputed store on disk or from a remote HTTP
service speaking a small JSON protocol (``POST /v1/embed``). The store is a
JSONL file whose floats are written with 9 significant digits, which is
exactly enough to round-trip 32-bit values bit-for-bit.
"""

from __future__ import annotations

import json
import logging
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

log = logging.getLogger(__name__)

DEFAULT_DIM = 768


class EmbeddingError(Exception):
    """Base class for provider and store failures."""


class TransportError(EmbeddingError):
    """The remote endpoint could not be reached or answered non-200."""


class ProtocolError(EmbeddingError):
    """The remote endpoint answered with a malformed or mismatched payload."""


class StoreFormatError(EmbeddingError):
    """The store file violates the JSONL store format."""


class StoreLookupError(EmbeddingError):
    """A requested id is absent from a precomputed store."""


def normalize_text(text: str) -> str:
    """NFC-normalize, drop control/format characters, collapse whitespace runs."""
    text = unicodedata.normalize("NFC", text)
    kept = "".join(
        ch for ch in text if ch.isspace() or unicodedata.category(ch) not in ("Cc", "Cf")
    )
    return " ".join(kept.split())


@dataclass(frozen=True)
class EmbeddingVector:
    """One tweet's sentence vector; entries must be finite."""

    tweet_id: str
    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float32)
        if arr.ndim != 1:
            raise ValueError("embedding values must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"embedding for {self.tweet_id} contains non-finite entries")
        object.__setattr__(self, "values", arr)


@dataclass
class EmbeddingStore:
    """In-memory id -> vector map with a fixed dimension and model tag."""

    dim: int = DEFAULT_DIM
    model_tag: str = "unknown"
    entries: dict[str, np.ndarray] = field(default_factory=dict)

    def add(self, tweet_id: str, values: np.ndarray) -> None:
        arr = np.asarray(values, dtype=np.float32)
        if arr.shape != (self.dim,):
            raise ValueError(f"vector for {tweet_id} has length {arr.shape}, store dim is {self.dim}")
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"vector for {tweet_id} contains non-finite entries")
        self.entries[tweet_id] = arr

    def get(self, tweet_id: str) -> np.ndarray:
        try:
            return self.entries[tweet_id]
        except KeyError:
            raise StoreLookupError(f"no embedding stored for id {tweet_id!r}") from None

    def __contains__(self, tweet_id: str) -> bool:
        return tweet_id in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def missing(self, ids: Sequence[str]) -> list[str]:
        return [i for i in ids if i not in self.entries]


@dataclass(frozen=True)
class ProviderConfig:
    """How vectors are obtained: a store on disk or a remote service."""

    mode: str  # "precomputed" | "remote"
    store_path: str | Path | None = None
    endpoint: str | None = None
    dim: int = DEFAULT_DIM
    batch_size: int = 64
    timeout_ms: int = 30_000
    max_retries: int = 3

    def __post_init__(self) -> None:
        if self.mode not in ("precomputed", "remote"):
            raise ValueError(f"unknown provider mode {self.mode!r}")
        if self.mode == "precomputed" and not self.store_path:
            raise ValueError("precomputed mode requires store_path")
        if self.mode == "remote" and not self.endpoint:
            raise ValueError("remote mode requires endpoint")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


def _format_float(x: float) -> str:
    return format(float(x), ".9g")


def save_store(store: EmbeddingStore, path: str | Path) -> None:
    """Write the JSONL store: a header line, then one ``{"id", "v"}`` line per entry."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps({"dim": store.dim, "model_tag": store.model_tag}) + "\n")
        for tweet_id, values in store.entries.items():
            joined = ",".join(_format_float(v) for v in values)
            fh.write(f'{{"id":{json.dumps(tweet_id)},"v":[{joined}]}}\n')


def load_store(path: str | Path) -> EmbeddingStore:
    """Read a JSONL store; values reload bit-exactly at 32-bit precision."""
    with open(path, encoding="utf-8") as fh:
        header_line = fh.readline()
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError as exc:
            raise StoreFormatError(f"{path}: invalid header line: {exc}") from exc
        if not isinstance(header, dict) or "dim" not in header or "model_tag" not in header:
            raise StoreFormatError(f"{path}: header must carry dim and model_tag")
        store = EmbeddingStore(dim=int(header["dim"]), model_tag=str(header["model_tag"]))
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise StoreFormatError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            values = obj.get("v", [])
            if len(values) != store.dim:
                raise StoreFormatError(
                    f"{path}:{lineno}: vector for {obj.get('id')!r} has length "
                    f"{len(values)}, expected {store.dim}"
                )
            try:
                store.add(str(obj["id"]), np.asarray(values, dtype=np.float32))
            except (KeyError, ValueError) as exc:
                raise StoreFormatError(f"{path}:{lineno}: {exc}") from exc
    return store


def _default_transport(url: str, payload: dict | None, timeout_s: float) -> tuple[int, object]:
    import requests  # deferred so offline use of the store never needs it

    try:
        if payload is None:
            resp = requests.get(url, timeout=timeout_s)
        else:
            resp = requests.post(url, json=payload, timeout=timeout_s)
    except requests.RequestException as exc:
        raise TransportError(f"request to {url} failed: {exc}") from exc
    try:
        body = resp.json()
    except ValueError:
        body = None
    return resp.status_code, body


Transport = Callable[[str, "dict | None", float], "tuple[int, object]"]


class RemoteEmbeddingClient:
    """Client side of the embed protocol; counts requests for cache auditing."""

    def __init__(self, config: ProviderConfig, transport: Transport | None = None):
        if config.mode != "remote":
            raise ValueError("RemoteEmbeddingClient requires a remote-mode config")
        self.config = config
        self._transport = transport or _default_transport
        self.request_count = 0

    def _call(self, url: str, payload: dict | None) -> object:
        timeout_s = self.config.timeout_ms / 1000.0
        last_error: Exception | None = None
        for _ in range(1 + max(0, self.config.max_retries)):
            self.request_count += 1
            try:
                status, body = self._transport(url, payload, timeout_s)
            except TransportError as exc:
                last_error = exc
                continue
            if status != 200:
                last_error = TransportError(f"{url} answered HTTP {status}")
                continue
            return body
        raise TransportError(f"{url} unreachable after {self.config.max_retries} retries: {last_error}")

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        body = self._call(self.config.endpoint.rstrip("/") + "/v1/embed", {"texts": list(texts)})
        if not isinstance(body, dict) or "vectors" not in body or "dim" not in body:
            raise ProtocolError("embed response must carry dim and vectors")
        if int(body["dim"]) != self.config.dim:
            raise ProtocolError(f"service dim {body['dim']} != configured dim {self.config.dim}")
        vectors = body["vectors"]
        if len(vectors) != len(texts):
            raise ProtocolError(f"got {len(vectors)} vectors for {len(texts)} texts")
        out = []
        for vec in vectors:
            arr = np.asarray(vec, dtype=np.float32)
            if arr.shape != (self.config.dim,):
                raise ProtocolError(f"vector of length {arr.shape} != dim {self.config.dim}")
            if not np.all(np.isfinite(arr)):
                raise ProtocolError("service returned non-finite vector entries")
            out.append(arr)
        return out

    def info(self) -> dict:
        body = self._call(self.config.endpoint.rstrip("/") + "/v1/info", None)
        if not isinstance(body, dict) or "model" not in body or "dim" not in body:
            raise ProtocolError("info response must carry model and dim")
        return body

    def healthy(self) -> bool:
        try:
            self._call(self.config.endpoint.rstrip("/") + "/healthz", None)
            return True
        except TransportError:
            return False


def embed_batch(
    texts: Sequence[str],
    config: ProviderConfig,
    *,
    ids: Sequence[str] | None = None,
    cache: EmbeddingStore | None = None,
    client: RemoteEmbeddingClient | None = None,
) -> list[np.ndarray]:
    """Resolve one vector per text, preserving input order.

    Precomputed mode looks ids up in the store (``ids`` is then required).
    Remote mode sends texts in ``batch_size`` chunks; when both ``ids`` and a
    ``cache`` store are given, cached ids are served locally and only the
    gaps hit the endpoint.
    """
    if ids is not None and len(ids) != len(texts):
        raise ValueError("ids and texts must have equal length")

    if config.mode == "precomputed":
        if ids is None:
            raise ValueError("precomputed mode requires ids")
        store = cache if cache is not None else load_store(config.store_path)
        return [store.get(i) for i in ids]

    client = client or RemoteEmbeddingClient(config)
    results: list[np.ndarray | None] = [None] * len(texts)
    pending: list[int] = []
    for pos in range(len(texts)):
        if cache is not None and ids is not None and ids[pos] in cache:
            results[pos] = cache.get(ids[pos])
        else:
            pending.append(pos)
    for start in range(0, len(pending), config.batch_size):
        chunk = pending[start : start + config.batch_size]
        vectors = client.embed([texts[pos] for pos in chunk])
        for pos, vec in zip(chunk, vectors):
            results[pos] = vec
    return results  # type: ignore[return-value]
