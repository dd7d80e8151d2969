"""Repository discovery against a code-forge REST API.

The HTTP client speaks a GitHub-compatible subset:

* ``GET {base}/search/repositories?q=<marker> in:readme&per_page=N&page=P``
* ``GET {base}/repos/{full_name}/contents/{path}`` (base64 ``content``)
* ``GET {base}/repos/{full_name}/commits?since=<iso>&per_page=1`` (count via
  the ``Link: rel="last"`` page number)

``FixtureForge`` serves the same questions from a JSON document so the
selection rules can run offline.
"""
from __future__ import annotations

import base64
import json
import math
import os
import re
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Protocol

import httpx

TOKEN_ENV = "COMMITFORGE_FORGE_TOKEN"
DOC_FILES = ("README.md", "CONTRIBUTING.md", "README.rst", "docs/CONTRIBUTING.md", ".github/CONTRIBUTING.md")


class ForgeUnreachable(ConnectionError):
    pass


class RateLimited(RuntimeError):
    def __init__(self, retry_after: float | None):
        self.retry_after = retry_after
        super().__init__(f"rate limited; retry after {retry_after}s")


@dataclass(frozen=True)
class RepoCriteria:
    license_allowlist: frozenset[str] = frozenset({"Apache-2.0", "MIT", "BSD-3-Clause"})
    min_forks: int = 10
    max_avg_daily_commits: float = 10.0
    min_age_years: int = 2
    max_age_years: int = 10
    earliest_commit_date: date = date(2020, 1, 1)
    ccs_marker: str = "conventionalcommits.org"

    def __post_init__(self) -> None:
        for name in ("min_forks", "max_avg_daily_commits", "min_age_years", "max_age_years"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


@dataclass(frozen=True)
class RepoInfo:
    full_name: str
    license: str | None
    forks: int
    created_at: datetime
    languages: tuple[str, ...] = ()


@dataclass
class RepoDescriptor:
    full_name: str
    info: RepoInfo
    passed: dict[str, bool] = field(default_factory=dict)
    avg_daily_commits: float | None = None

    @property
    def selected(self) -> bool:
        return all(self.passed.values())

    def to_dict(self) -> dict:
        return {
            "full_name": self.full_name,
            "license": self.info.license,
            "forks": self.info.forks,
            "created_at": self.info.created_at.isoformat(),
            "languages": list(self.info.languages),
            "passed": dict(sorted(self.passed.items())),
            "avg_daily_commits": self.avg_daily_commits,
            "selected": self.selected,
        }


class Forge(Protocol):
    def candidates(self, marker: str) -> list[RepoInfo]: ...

    def read_file(self, full_name: str, path: str) -> str | None: ...

    def commit_count_since(self, full_name: str, since: date) -> int: ...


def _years_between(start: datetime, end: datetime) -> float:
    return (end - start).days / 365.25


def evaluate_repo(
    forge: Forge, info: RepoInfo, criteria: RepoCriteria, now: datetime
) -> RepoDescriptor:
    desc = RepoDescriptor(info.full_name, info)
    docs = (forge.read_file(info.full_name, p) for p in DOC_FILES)
    marker = criteria.ccs_marker.lower()
    desc.passed["ccs_marker"] = any(d is not None and marker in d.lower() for d in docs)
    desc.passed["license"] = info.license in criteria.license_allowlist
    desc.passed["min_forks"] = info.forks >= criteria.min_forks
    age = _years_between(info.created_at, now)
    desc.passed["age"] = criteria.min_age_years <= age <= criteria.max_age_years
    window_start = max(
        datetime.combine(criteria.earliest_commit_date, datetime.min.time(), timezone.utc),
        info.created_at,
    )
    days = max((now - window_start).days, 1)
    count = forge.commit_count_since(info.full_name, window_start.date())
    desc.avg_daily_commits = count / days
    desc.passed["avg_daily_commits"] = desc.avg_daily_commits < criteria.max_avg_daily_commits
    return desc


def discover_repos(
    criteria: RepoCriteria, forge: Forge, now: datetime | None = None
) -> list[RepoDescriptor]:
    """Repositories mentioning the marker in their docs and meeting every threshold."""
    now = now or datetime.now(timezone.utc)
    out = []
    for info in forge.candidates(criteria.ccs_marker):
        desc = evaluate_repo(forge, info, criteria, now)
        if desc.selected:
            out.append(desc)
    return sorted(out, key=lambda d: d.full_name)


class FixtureForge:
    """Forge backed by a JSON document::

        {"repos": [{"full_name": ..., "license": ..., "forks": ..., "created_at": ...,
                    "files": {"README.md": ...}, "commit_dates": ["2021-01-02", ...]}]}
    """

    def __init__(self, data: dict):
        self.repos = {r["full_name"]: r for r in data["repos"]}

    @classmethod
    def load(cls, path: str | Path) -> FixtureForge:
        return cls(json.loads(Path(path).read_text()))

    def candidates(self, marker: str) -> list[RepoInfo]:
        return [
            RepoInfo(
                full_name=r["full_name"],
                license=r.get("license"),
                forks=int(r.get("forks", 0)),
                created_at=datetime.fromisoformat(r["created_at"].replace("Z", "+00:00")),
                languages=tuple(r.get("languages", ())),
            )
            for r in self.repos.values()
        ]

    def read_file(self, full_name: str, path: str) -> str | None:
        return self.repos[full_name].get("files", {}).get(path)

    def commit_count_since(self, full_name: str, since: date) -> int:
        dates = self.repos[full_name].get("commit_dates", [])
        return sum(1 for d in dates if date.fromisoformat(d[:10]) >= since)


_LAST_PAGE = re.compile(r'[?&]page=(\d+)[^>]*>;\s*rel="last"')


class HttpForge:
    def __init__(
        self,
        base_url: str = "https://api.github.com",
        token: str | None = None,
        transport: httpx.BaseTransport | None = None,
        max_candidates: int = 1000,
        timeout: float = 30.0,
    ):
        token = token if token is not None else os.environ.get(TOKEN_ENV)
        headers = {"Accept": "application/vnd.github+json"}
        if token:
            headers["Authorization"] = f"Bearer {token}"
        self.client = httpx.Client(
            base_url=base_url.rstrip("/"), headers=headers, transport=transport, timeout=timeout
        )
        self.max_candidates = max_candidates

    def _get(self, url: str, **params) -> httpx.Response:
        try:
            resp = self.client.get(url, params=params or None)
        except httpx.TransportError as exc:
            raise ForgeUnreachable(str(exc)) from exc
        if resp.status_code == 429 or (
            resp.status_code == 403 and resp.headers.get("x-ratelimit-remaining") == "0"
        ):
            retry = resp.headers.get("retry-after")
            if retry is None and "x-ratelimit-reset" in resp.headers:
                retry = max(0.0, float(resp.headers["x-ratelimit-reset"]) - datetime.now().timestamp())
            raise RateLimited(float(retry) if retry is not None else None)
        if resp.status_code >= 500:
            raise ForgeUnreachable(f"{url}: HTTP {resp.status_code}")
        return resp

    def candidates(self, marker: str) -> list[RepoInfo]:
        out: list[RepoInfo] = []
        per_page = 100
        for page in range(1, math.ceil(self.max_candidates / per_page) + 1):
            resp = self._get("/search/repositories", q=f"{marker} in:readme", per_page=per_page, page=page)
            resp.raise_for_status()
            items = resp.json().get("items", [])
            for it in items:
                lic = (it.get("license") or {}).get("spdx_id")
                out.append(
                    RepoInfo(
                        full_name=it["full_name"],
                        license=lic,
                        forks=int(it.get("forks_count", 0)),
                        created_at=datetime.fromisoformat(it["created_at"].replace("Z", "+00:00")),
                        languages=(it["language"],) if it.get("language") else (),
                    )
                )
            if len(items) < per_page:
                break
        return out

    def read_file(self, full_name: str, path: str) -> str | None:
        resp = self._get(f"/repos/{full_name}/contents/{path}")
        if resp.status_code == 404:
            return None
        resp.raise_for_status()
        body = resp.json()
        if body.get("encoding") == "base64":
            return base64.b64decode(body.get("content", "")).decode("utf-8", errors="replace")
        return body.get("content")

    def commit_count_since(self, full_name: str, since: date) -> int:
        resp = self._get(f"/repos/{full_name}/commits", since=f"{since.isoformat()}T00:00:00Z", per_page=1)
        if resp.status_code == 409:  # empty repository
            return 0
        resp.raise_for_status()
        m = _LAST_PAGE.search(resp.headers.get("link", ""))
        if m:
            return int(m.group(1))
        return len(resp.json())
