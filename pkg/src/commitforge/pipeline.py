"""Stage functions shared by the CLI and the experiment scripts.

Each stage maps a list of :class:`AnnotatedCommit` rows to a new list, so the
CLI only has to add file I/O and manifests around them.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path
from typing import Callable, Iterable, Sequence, TypeVar

from .ast_change import ParseFailure, diff_structures, extract_declarations, map_hunks
from .ccs import parse_message
from .datastore import AnnotatedCommit
from .filters import FilterConfig, FilterOutcome, FilterProvenance, run_filters
from .judge import Judge, UnparseableReply
from .languages import SUPPORTED
from .miner import DEFAULT_CONTENT_CAP, HistoryWalker, canonical_order

log = logging.getLogger(__name__)
T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> list[R]:
    """Order-preserving map; ``jobs <= 1`` runs inline."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# --- mine ---------------------------------------------------------------------

@dataclass
class MineResult:
    commits: list[AnnotatedCommit]
    warnings: list[tuple[str, str, str]] = field(default_factory=list)  # repo, hash, message
    per_repo: dict[str, int] = field(default_factory=dict)


def mine_repos(
    repos: Sequence[str | Path],
    since: date | datetime | None = None,
    jobs: int = 1,
    content_cap: int = DEFAULT_CONTENT_CAP,
    partial_repos: Iterable[str] = (),
) -> MineResult:
    partial = set(partial_repos)

    def one(path):
        walker = HistoryWalker(Path(path), content_cap=content_cap)
        tier = "partial" if walker.repo_id in partial else "strict"
        rows = [AnnotatedCommit.from_raw(c, tier) for c in walker.walk(since)]
        return walker.repo_id, rows, walker.warnings

    result = MineResult([])
    for repo_id, rows, warns in parallel_map(one, list(repos), jobs):
        result.commits += rows
        result.per_repo[repo_id] = len(rows)
        result.warnings += [(repo_id, h, m) for h, m in warns]
    result.commits = canonical_order(result.commits)
    return result


# --- filter -------------------------------------------------------------------

def filter_commits(
    commits: Sequence[AnnotatedCommit], cfg: FilterConfig | None = None
) -> tuple[list[AnnotatedCommit], list[AnnotatedCommit], FilterOutcome]:
    """Run the cascade; kept rows gain their parsed message, all rows their provenance."""
    outcome = run_filters([c.raw for c in commits], cfg)
    kept, dropped = [], []
    for c, prov in zip(commits, outcome.provenance):
        if prov.final == "kept":
            kept.append(c.with_(ccs=parse_message(c.raw.message), provenance=prov))
        else:
            dropped.append(c.with_(provenance=FilterProvenance(list(prov.stage_results))))
    return kept, dropped, outcome


# --- ast ----------------------------------------------------------------------

def _declarations(text: str | None, language: str, path: str):
    if text is None:
        return []
    try:
        return extract_declarations(text, language, path)
    except ParseFailure:
        return []


def enrich_ast(commit: AnnotatedCommit) -> AnnotatedCommit:
    changes, hunks = [], []
    for m in commit.raw.modifications:
        if m.language not in SUPPORTED:
            continue
        # a side that exists but has no content was binary or over the size cap
        if (m.path_before is not None and m.content_before is None) or (
            m.path_after is not None and m.content_after is None
        ):
            continue
        before = m.content_before if m.path_before is not None else None
        after = m.content_after if m.path_after is not None else None
        if before is None and after is None:
            continue
        changes += diff_structures(before, after, m.language, m.path)
        hunks += map_hunks(
            m.unified_diff,
            _declarations(before, m.language, m.path),
            _declarations(after, m.language, m.path),
            m.path,
        )
    return commit.with_(ast_changes=tuple(changes), hunk_contexts=tuple(hunks))


def ast_stage(commits: Sequence[AnnotatedCommit], jobs: int = 1) -> list[AnnotatedCommit]:
    return parallel_map(enrich_ast, list(commits), jobs)


# --- annotate -----------------------------------------------------------------

@dataclass
class AnnotateResult:
    commits: list[AnnotatedCommit]
    failures: list[tuple[str, str, str]] = field(default_factory=list)  # repo, hash, error


def annotate_stage(commits: Sequence[AnnotatedCommit], judge: Judge, jobs: int = 1) -> AnnotateResult:
    """Attach what/why flags; a commit whose reply cannot be used stays unannotated.

    An unreachable endpoint is an environment problem and propagates.
    """

    def one(c: AnnotatedCommit):
        try:
            return c.with_(what_why=judge.annotate_what_why(c)), None
        except (UnparseableReply, ValueError) as e:
            log.warning("annotation failed for %s/%s: %s", c.raw.repo_id, c.raw.hash, e)
            return c.with_(what_why=None), f"{type(e).__name__}: {e}"

    out = AnnotateResult([])
    for c, err in parallel_map(one, list(commits), jobs):
        out.commits.append(c)
        if err:
            out.failures.append((c.raw.repo_id, c.raw.hash, err))
    return out
