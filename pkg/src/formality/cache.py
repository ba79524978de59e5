"""On-disk cache of reports, one JSON file per record named by its key digest."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__

CACHE_SCHEMA = "formality-cache/1"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def cache_key(problem: dict) -> str:
    """SHA-256 of the canonical problem description plus the engine version."""
    payload = dict(problem, engine_version=__version__)
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()


@dataclass(frozen=True)
class CacheRecord:
    key: str
    value: dict
    timestamp: float


class ReportCache:
    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)

    def path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str) -> CacheRecord | None:
        """The stored record, or None if absent, unreadable, or for a different key/version."""
        try:
            doc = json.loads(self.path(key).read_text())
        except (OSError, ValueError):
            return None
        if not isinstance(doc, dict):
            return None
        if doc.get("schema") != CACHE_SCHEMA or doc.get("key") != key:
            return None
        if doc.get("engine_version") != __version__ or not isinstance(doc.get("value"), dict):
            return None
        return CacheRecord(key, doc["value"], doc.get("timestamp", 0.0))

    def put(self, key: str, value: dict) -> CacheRecord:
        self.directory.mkdir(parents=True, exist_ok=True)
        record = CacheRecord(key, value, time.time())
        doc = {
            "schema": CACHE_SCHEMA,
            "engine_version": __version__,
            "key": key,
            "timestamp": record.timestamp,
            "value": value,
        }
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(doc, fh, sort_keys=True, indent=1)
            os.replace(tmp, self.path(key))
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
        return record
