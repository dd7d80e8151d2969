"""Schema-versioned JSONL persistence.

Line 1 is a header object ``{"record": "AnnotatedCommit", "schema_version": 1}``;
every following line is one :class:`AnnotatedCommit` as a flat JSON object with
sorted keys. Writers take an exclusive advisory lock on the target file and
readers a shared one, so a reader never sees a half-written dataset.
"""
from __future__ import annotations

import fcntl
import json
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable, Iterator

from .records import AnnotatedCommit

SCHEMA_VERSION = 1
RECORD = "AnnotatedCommit"


class DatasetError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class SchemaMismatch(DatasetError):
    pass


class DuplicateKey(DatasetError):
    pass


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


@contextmanager
def _locked(path: Path, mode: str, lock: int) -> Iterator:
    with open(path, mode, encoding="utf-8", newline="\n") as fh:
        fcntl.flock(fh.fileno(), lock)
        try:
            yield fh
        finally:
            fcntl.flock(fh.fileno(), fcntl.LOCK_UN)


def header_line() -> str:
    return _dump({"record": RECORD, "schema_version": SCHEMA_VERSION})


def write_dataset(path: str | Path, commits: Iterable[AnnotatedCommit]) -> int:
    """Write commits in the given order; returns the row count.

    Rejects duplicate (repo_id, hash) keys before touching the file.
    """
    path = Path(path)
    rows = list(commits)
    seen: set[tuple[str, str]] = set()
    for i, c in enumerate(rows):
        if c.key in seen:
            raise DuplicateKey(f"duplicate key {c.key}", i + 2)
        seen.add(c.key)
    path.parent.mkdir(parents=True, exist_ok=True)
    # truncate only once the lock is held, never under a reader
    path.touch(exist_ok=True)
    with _locked(path, "r+", fcntl.LOCK_EX) as fh:
        fh.seek(0)
        fh.truncate()
        fh.write(header_line() + "\n")
        for c in rows:
            fh.write(_dump(c.to_dict()) + "\n")
        fh.flush()
        os.fsync(fh.fileno())
    return len(rows)


def iter_dataset(path: str | Path) -> Iterator[AnnotatedCommit]:
    path = Path(path)
    with _locked(path, "r", fcntl.LOCK_SH) as fh:
        text = fh.read()
    if not text:
        raise DatasetError("empty file, expected a schema header", 1)
    lines = text.split("\n")
    if lines[-1] != "":
        raise DatasetError("truncated record (no trailing newline)", len(lines))
    lines.pop()
    try:
        head = json.loads(lines[0])
    except json.JSONDecodeError as e:
        raise DatasetError(f"malformed header: {e.msg}", 1) from None
    if not isinstance(head, dict) or head.get("record") != RECORD:
        raise SchemaMismatch(f"not a {RECORD} dataset", 1)
    if head.get("schema_version") != SCHEMA_VERSION:
        raise SchemaMismatch(
            f"schema_version {head.get('schema_version')!r} is not supported (expected {SCHEMA_VERSION})", 1
        )
    seen: set[tuple[str, str]] = set()
    for no, line in enumerate(lines[1:], start=2):
        try:
            commit = AnnotatedCommit.from_dict(json.loads(line))
        except json.JSONDecodeError as e:
            raise DatasetError(f"malformed JSON: {e.msg}", no) from None
        except (KeyError, TypeError, ValueError) as e:
            raise DatasetError(f"invalid record: {type(e).__name__}: {e}", no) from None
        if commit.key in seen:
            raise DuplicateKey(f"duplicate key {commit.key}", no)
        seen.add(commit.key)
        yield commit


def read_dataset(path: str | Path) -> list[AnnotatedCommit]:
    return list(iter_dataset(path))
