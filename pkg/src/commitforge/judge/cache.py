"""Content-addressed verdict cache: one JSON file per (prompt_hash, judge_id)."""
from __future__ import annotations

import hashlib
import json
import os
import threading
from pathlib import Path


def cache_key(prompt_hash: str, judge_id: str) -> str:
    return hashlib.sha256(f"{judge_id}\n{prompt_hash}".encode("utf-8")).hexdigest()


class VerdictCache:
    """Stores parsed replies; a hit returns exactly what was stored.

    Access is serialized by a lock so concurrent batch workers never observe a
    half-written file; writes go through a temp file and ``os.replace``.
    """

    def __init__(self, root: str | Path | None):
        self.root = Path(root) if root is not None else None
        self._lock = threading.Lock()

    def _path(self, key: str) -> Path:
        assert self.root is not None
        return self.root / key[:2] / f"{key}.json"

    def get(self, prompt_hash: str, judge_id: str) -> dict | None:
        if self.root is None:
            return None
        path = self._path(cache_key(prompt_hash, judge_id))
        with self._lock:
            if not path.exists():
                return None
            return json.loads(path.read_text("utf-8"))

    def put(self, prompt_hash: str, judge_id: str, record: dict) -> None:
        if self.root is None:
            return
        path = self._path(cache_key(prompt_hash, judge_id))
        blob = json.dumps(record, sort_keys=True, ensure_ascii=False, indent=1)
        with self._lock:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(f".tmp{os.getpid()}.{threading.get_ident()}")
            tmp.write_text(blob, "utf-8")
            os.replace(tmp, path)
