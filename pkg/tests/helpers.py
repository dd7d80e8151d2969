"""Small constructors for test data."""
from __future__ import annotations

import hashlib
from datetime import datetime, timezone

from commitforge.miner import FileModification, RawCommit


def mod(path: str, added: int = 1, before: str | None = None, after: str | None = None) -> FileModification:
    diff = f"@@ -0,0 +1,{added} @@\n" + "".join(f"+line {i}\n" for i in range(added))
    return FileModification.from_diff(None, path, diff, before, after)


def commit(
    message: str = "feat: x",
    paths: tuple[str, ...] = ("a.py",),
    author: str = "Alice",
    email: str = "alice@example.org",
    added: int = 1,
    repo_id: str = "org/repo",
    idx: int = 0,
) -> RawCommit:
    h = hashlib.sha1(f"{repo_id}:{idx}:{message}".encode()).hexdigest()
    when = datetime(2021, 1, 1, tzinfo=timezone.utc)
    return RawCommit(repo_id, h, author, email, when, message, tuple(mod(p, added) for p in paths))


class GitRepo:
    """Throwaway repository with deterministic author data."""

    def __init__(self, path):
        import os
        import subprocess
        from pathlib import Path

        self.path = Path(path)
        self.path.mkdir(parents=True, exist_ok=True)
        self._env = {**os.environ, "GIT_CONFIG_NOSYSTEM": "1", "HOME": str(self.path)}
        self._run = subprocess.run
        self.git("init", "-q", "-b", "main")
        self.git("config", "commit.gpgsign", "false")

    def git(self, *args: str, env: dict | None = None) -> str:
        out = self._run(["git", "-C", str(self.path), *args], check=True, capture_output=True,
                        env={**self._env, **(env or {})})
        return out.stdout.decode()

    def commit(self, message: str, files: dict[str, str | bytes | None] | None = None, when: str = "2021-01-01T12:00:00",
               author: tuple[str, str] = ("Alice", "alice@example.org")) -> str:
        for rel, text in (files or {}).items():
            p = self.path / rel
            if text is None:
                p.unlink()
                continue
            p.parent.mkdir(parents=True, exist_ok=True)
            if isinstance(text, bytes):
                p.write_bytes(text)
            else:
                p.write_text(text)
        self.git("add", "-A")
        stamp = when + "+0000"
        env = {"GIT_AUTHOR_NAME": author[0], "GIT_AUTHOR_EMAIL": author[1], "GIT_AUTHOR_DATE": stamp,
               "GIT_COMMITTER_NAME": author[0], "GIT_COMMITTER_EMAIL": author[1], "GIT_COMMITTER_DATE": stamp}
        self.git("commit", "-q", "--allow-empty", "-m", message, env=env)
        return self.git("rev-parse", "HEAD").strip()
