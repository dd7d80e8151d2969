"""Commit extraction from local git clones.

Talks to ``git`` through subprocess: ``git log`` lists non-merge commits,
``git diff-tree`` yields per-file raw records and patches (renames detected
with ``-M``), and one long-lived ``git cat-file --batch`` reads blob contents.
"""
from __future__ import annotations

import logging
import re
import subprocess
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Iterator

from .diffparse import count_changes
from .languages import OTHER, SUPPORTED, detect_language

log = logging.getLogger(__name__)

DEFAULT_CONTENT_CAP = 1 << 20  # bytes per file version
NULL_SHA = "0" * 40


class RepositoryNotFound(OSError):
    pass


@dataclass(frozen=True)
class FileModification:
    path_before: str | None
    path_after: str | None
    language: str
    unified_diff: str
    added_lines: int
    deleted_lines: int
    content_before: str | None = None
    content_after: str | None = None

    @property
    def path(self) -> str:
        return self.path_after or self.path_before or ""

    def to_dict(self) -> dict:
        return {
            "path_before": self.path_before,
            "path_after": self.path_after,
            "language": self.language,
            "unified_diff": self.unified_diff,
            "added_lines": self.added_lines,
            "deleted_lines": self.deleted_lines,
            "content_before": self.content_before,
            "content_after": self.content_after,
        }

    @classmethod
    def from_dict(cls, d: dict) -> FileModification:
        return cls(**{k: d.get(k) for k in cls.__dataclass_fields__})

    @classmethod
    def from_diff(
        cls,
        path_before: str | None,
        path_after: str | None,
        unified_diff: str,
        content_before: str | None = None,
        content_after: str | None = None,
    ) -> FileModification:
        added, deleted = count_changes(unified_diff)
        return cls(
            path_before=path_before,
            path_after=path_after,
            language=detect_language(path_after or path_before),
            unified_diff=unified_diff,
            added_lines=added,
            deleted_lines=deleted,
            content_before=content_before,
            content_after=content_after,
        )


@dataclass(frozen=True)
class RawCommit:
    repo_id: str
    hash: str
    author_name: str
    author_email: str
    timestamp: datetime
    message: str
    modifications: tuple[FileModification, ...] = ()
    linked_refs: tuple[str, ...] = ()
    # reserved: comment threads are not crawled
    comments: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "repo_id": self.repo_id,
            "hash": self.hash,
            "author_name": self.author_name,
            "author_email": self.author_email,
            "timestamp": self.timestamp.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
            "message": self.message,
            "modifications": [m.to_dict() for m in self.modifications],
            "linked_refs": list(self.linked_refs),
            "comments": list(self.comments),
        }

    @classmethod
    def from_dict(cls, d: dict) -> RawCommit:
        return cls(
            repo_id=d["repo_id"],
            hash=d["hash"],
            author_name=d["author_name"],
            author_email=d["author_email"],
            timestamp=parse_utc(d["timestamp"]),
            message=d["message"],
            modifications=tuple(FileModification.from_dict(m) for m in d.get("modifications", [])),
            linked_refs=tuple(d.get("linked_refs", [])),
            comments=tuple(d.get("comments", [])),
        )

    @property
    def languages(self) -> set[str]:
        return {m.language for m in self.modifications}


def parse_utc(text: str) -> datetime:
    dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


# --- linked references ---------------------------------------------------

_HASH_REF = re.compile(r"(?<![\w/#])#\d+\b")
_FOOTER_REF = re.compile(
    r"^[ \t]*(?:close[sd]?|fix(?:e[sd])?|resolve[sd]?|refs?)\b[ \t]*:?[ \t]*(.+)$",
    re.IGNORECASE | re.MULTILINE,
)
_REF_TOKEN = re.compile(r"(?:[\w.-]+/[\w.-]+)?#\d+|https?://\S+|[A-Za-z][A-Za-z0-9]*-\d+")


def extract_linked_refs(message: str) -> list[str]:
    """Issue/PR references: ``#N`` anywhere, plus values of Closes/Fixes/Refs lines.

    The header line is never read as a footer (``fix: ...`` is a type, not a
    trailer). Results are deduplicated in order of first appearance.
    """
    header_end = message.find("\n")
    body_start = len(message) if header_end < 0 else header_end + 1
    found: list[tuple[int, str]] = []
    covered: list[tuple[int, int]] = []
    for fm in _FOOTER_REF.finditer(message, body_start):
        base = fm.start(1)
        for tok in _REF_TOKEN.finditer(fm.group(1)):
            found.append((base + tok.start(), tok.group(0)))
            covered.append((base + tok.start(), base + tok.end()))
    for hm in _HASH_REF.finditer(message):
        if not any(s <= hm.start() < e for s, e in covered):
            found.append((hm.start(), hm.group(0)))
    out: list[str] = []
    for _, ref in sorted(found):
        if ref not in out:
            out.append(ref)
    return out


# --- git plumbing -----------------------------------------------------------

def _git(repo: Path, *args: str, check: bool = True) -> str:
    proc = subprocess.run(
        ["git", "-c", "core.quotepath=false", "-C", str(repo), *args],
        capture_output=True,
        check=False,
    )
    if check and proc.returncode != 0:
        raise subprocess.CalledProcessError(proc.returncode, args, proc.stdout, proc.stderr)
    return proc.stdout.decode("utf-8", errors="replace")


class _BlobReader:
    def __init__(self, repo: Path):
        self.proc = subprocess.Popen(
            ["git", "-C", str(repo), "cat-file", "--batch"],
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
        )

    def read(self, sha: str, cap: int) -> str | None:
        assert self.proc.stdin and self.proc.stdout
        self.proc.stdin.write(sha.encode() + b"\n")
        self.proc.stdin.flush()
        header = self.proc.stdout.readline().decode().split()
        if len(header) < 3 or header[1] == "missing":
            return None
        size = int(header[2])
        data = self.proc.stdout.read(size + 1)[:size]
        if size > cap:
            return None
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError:
            return None

    def close(self) -> None:
        if self.proc.stdin:
            self.proc.stdin.close()
        self.proc.wait()


@dataclass
class _RawEntry:
    status: str
    old_sha: str
    new_sha: str
    path_before: str | None
    path_after: str | None


def _parse_raw(out: str) -> list[_RawEntry]:
    # -z raw format: ":<modes> <shas> <status>\0<path>\0[<path>\0]"
    parts = out.split("\0")
    entries: list[_RawEntry] = []
    i = 0
    while i < len(parts) and parts[i]:
        meta = parts[i].lstrip(":").split()
        status = meta[4]
        old_sha, new_sha = meta[2], meta[3]
        if status[0] in "RC":
            src, dst = parts[i + 1], parts[i + 2]
            i += 3
        else:
            src = dst = parts[i + 1]
            i += 2
        entries.append(
            _RawEntry(
                status=status,
                old_sha=old_sha,
                new_sha=new_sha,
                path_before=None if status[0] == "A" else src,
                path_after=None if status[0] == "D" else dst,
            )
        )
    return entries


def _split_patch(patch: str) -> list[str]:
    sections: list[list[str]] = []
    for line in patch.split("\n"):
        if line.startswith("diff --git "):
            sections.append([])
        if sections:
            sections[-1].append(line)
    out = []
    for sec in sections:
        # keep only the hunks; file headers are reconstructible from paths
        start = next((i for i, ln in enumerate(sec) if ln.startswith("@@")), len(sec))
        body = "\n".join(sec[start:]).rstrip("\n")
        out.append(body + "\n" if body else "")
    return out


@dataclass
class HistoryWalker:
    """Iterates non-merge commits of one repository.

    ``warnings`` collects ``(hash, message)`` pairs for commits that could not
    be read and were skipped.
    """

    repo_path: Path
    repo_id: str | None = None
    content_cap: int = DEFAULT_CONTENT_CAP
    warnings: list[tuple[str, str]] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.repo_path = Path(self.repo_path)
        probe = subprocess.run(
            ["git", "-C", str(self.repo_path), "rev-parse", "--git-dir"], capture_output=True
        )
        if not self.repo_path.exists() or probe.returncode != 0:
            raise RepositoryNotFound(f"not a git repository: {self.repo_path}")
        if self.repo_id is None:
            self.repo_id = self.repo_path.resolve().name

    def _list(self) -> list[tuple[str, str, str, int, str]]:
        if not _git(self.repo_path, "rev-parse", "--verify", "--quiet", "HEAD", check=False).strip():
            return []  # no commits yet
        out = _git(
            self.repo_path,
            "log",
            "--no-merges",
            "--date-order",
            "--format=%H%x00%an%x00%ae%x00%at%x00%B%x00%x1e",
        )
        rows = []
        for rec in out.split("\x1e"):
            rec = rec.lstrip("\n")
            if not rec:
                continue
            h, an, ae, at, body, _ = rec.split("\x00")
            rows.append((h, an, ae, int(at), body.rstrip("\n")))
        return rows

    def _modifications(self, sha: str, blobs: _BlobReader) -> tuple[FileModification, ...]:
        common = ("diff-tree", "-r", "-M", "--root", "--no-commit-id", "--no-abbrev", "--no-ext-diff")
        raw = _parse_raw(_git(self.repo_path, *common, "-z", "--raw", sha))
        patches = _split_patch(
            _git(self.repo_path, *common, "-p", "--no-color", "--src-prefix=a/", "--dst-prefix=b/", sha)
        )
        if len(raw) != len(patches):
            raise RuntimeError(f"raw/patch mismatch ({len(raw)} vs {len(patches)})")
        mods = []
        for entry, diff in zip(raw, patches):
            lang = detect_language(entry.path_after or entry.path_before)
            before = after = None
            if lang in SUPPORTED:
                if entry.path_before is not None and entry.old_sha != NULL_SHA:
                    before = blobs.read(entry.old_sha, self.content_cap)
                if entry.path_after is not None and entry.new_sha != NULL_SHA:
                    after = blobs.read(entry.new_sha, self.content_cap)
            mods.append(
                FileModification.from_diff(entry.path_before, entry.path_after, diff, before, after)
            )
        return tuple(mods)

    def walk(self, since: date | datetime | None = None) -> Iterator[RawCommit]:
        """Yield commits authored on/after ``since``, newest first (git date order)."""
        if since is None:
            cutoff = 0.0
        elif isinstance(since, datetime):
            cutoff = (since if since.tzinfo else since.replace(tzinfo=timezone.utc)).timestamp()
        else:
            cutoff = datetime(since.year, since.month, since.day, tzinfo=timezone.utc).timestamp()
        blobs = _BlobReader(self.repo_path)
        try:
            for h, an, ae, at, body in self._list():
                if at < cutoff:
                    continue
                try:
                    mods = self._modifications(h, blobs)
                except (subprocess.CalledProcessError, RuntimeError, IndexError, ValueError) as exc:
                    log.warning("skipping commit %s: %s", h, exc)
                    self.warnings.append((h, str(exc)))
                    continue
                yield RawCommit(
                    repo_id=self.repo_id,
                    hash=h,
                    author_name=an,
                    author_email=ae,
                    timestamp=datetime.fromtimestamp(at, tz=timezone.utc),
                    message=body,
                    modifications=mods,
                    linked_refs=tuple(extract_linked_refs(body)),
                )
        finally:
            blobs.close()


def walk_history(
    repo_path: str | Path,
    since: date | datetime | None = None,
    repo_id: str | None = None,
    content_cap: int = DEFAULT_CONTENT_CAP,
) -> Iterator[RawCommit]:
    return HistoryWalker(Path(repo_path), repo_id, content_cap).walk(since)


def canonical_order(commits):
    """Sort key used for every JSONL output: repo, then time, then hash."""
    def key(c):
        raw = getattr(c, "raw", c)
        return (raw.repo_id, raw.timestamp, raw.hash)

    return sorted(commits, key=key)


__all__ = [
    "FileModification",
    "RawCommit",
    "RepositoryNotFound",
    "HistoryWalker",
    "walk_history",
    "extract_linked_refs",
    "canonical_order",
    "OTHER",
]
