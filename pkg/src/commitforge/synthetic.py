"""Synthetic corpora: a labelled git repository and in-memory sampling pools.

:func:`build_filter_repo` writes a small repository whose every commit was
designed to land in one known place of the filter cascade, so the expected
partition is fixed before any filtering code runs. The pool builders make
AnnotatedCommit lists with a known composition for the samplers and stats.
"""
from __future__ import annotations

import hashlib
import os
import random
import subprocess
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .ast_change import ADDED, DELETED, MODIFIED, HunkContext, StructuralChange, StructureKind
from .ccs import COMMIT_TYPES, CcsMessage, format_message
from .datastore import AnnotatedCommit
from .filters import STAGES, FilterProvenance
from .judge import WhatWhyFlags
from .languages import C, CPP, GO, JAVA, JAVASCRIPT, PYTHON, SUPPORTED, TYPESCRIPT
from .miner import FileModification, RawCommit

BEFORE_SINCE = "before_since"
KEPT = "kept"

_EXT = {C: ".c", CPP: ".cpp", JAVA: ".java", PYTHON: ".py", GO: ".go", JAVASCRIPT: ".js", TYPESCRIPT: ".ts"}
_LANG_CYCLE = (PYTHON, GO, JAVA, C, CPP, JAVASCRIPT, TYPESCRIPT)
_HUMANS = (
    ("Alice Chen", "alice@example.org"),
    ("Dmitri Ivanov", "dmitri@example.org"),
    ("Priya Nair", "priya@example.org"),
    ("Tomasz Nowak", "tomasz@example.org"),
)
_BOTS = (
    ("dependabot[bot]", "49699333+dependabot[bot]@users.noreply.github.com"),
    ("renovate-bot", "renovate@whitesourcesoftware.com"),
    ("github-actions[bot]", "actions@github.com"),
    ("ci-b0t", "ci@example.org"),
    ("Release Bot", "release@example.org"),
    ("Sam Lee", "autobot@example.org"),
    ("CodeBot", "codebot@example.org"),
    ("deploy-bot", "deploy@example.org"),
)
_ROBERTS = (
    ("Robert Smith", "rsmith@example.org"),
    ("robert", "r@example.org"),
    ("Kim Park", "robert.k@example.org"),
)
_WORDS = "cache parser buffer header token config loader index queue route schema".split()
_FILLER = "for the new request handling path".split()


def snippet(language: str, name: str, k: int) -> str:
    """A tiny source file declaring one function ``name``; ``k`` varies the body."""
    if language == PYTHON:
        return f"def {name}(x):\n    return x + {k}\n"
    if language == GO:
        return f"package main\n\nfunc {name}(x int) int {{\n\treturn x + {k}\n}}\n"
    if language == C:
        return f"int {name}(int x) {{\n    return x + {k};\n}}\n"
    if language == CPP:
        return f"namespace ns {{\nint {name}(int x) {{ return x + {k}; }}\n}}\n"
    if language == JAVA:
        return f"class {name.capitalize()} {{\n    int {name}(int x) {{ return x + {k}; }}\n}}\n"
    if language == JAVASCRIPT:
        return f"function {name}(x) {{\n  return x + {k};\n}}\n"
    if language == TYPESCRIPT:
        return f"export function {name}(x: number): number {{\n  return x + {k};\n}}\n"
    raise ValueError(language)


@dataclass
class PlannedCommit:
    message: str
    files: dict[str, str]
    author: tuple[str, str]
    when: datetime
    expect: str  # KEPT, BEFORE_SINCE, or the stage that drops it
    branch: str | None = None  # committed on a side branch merged right after


@dataclass
class FilterRepo:
    path: Path
    since: str
    hashes: list[str] = field(default_factory=list)
    expected: dict[str, str] = field(default_factory=dict)  # hash -> KEPT | stage | BEFORE_SINCE

    def expected_stage_counts(self) -> dict[str, dict[str, int]]:
        """Per-stage in/removed counts implied by the labels."""
        labels = [v for v in self.expected.values() if v != BEFORE_SINCE]
        out = {}
        alive = len(labels)
        for s in STAGES:
            removed = sum(1 for v in labels if v == s)
            out[s] = {"in": alive, "removed": removed}
            alive -= removed
        return out


def _normal_message(i: int, names: list[str], with_why: bool) -> str:
    t = COMMIT_TYPES[i % len(COMMIT_TYPES)].value
    scope = f"({_WORDS[i % len(_WORDS)]})" if i % 3 == 0 else ""
    extra = _FILLER[: i % 4]
    desc = " ".join(["update", names[0], *extra])
    if with_why:
        desc += " to avoid stale reads"
    return f"{t}{scope}: {desc}"


def plan_filter_repo(seed: int = 7) -> list[PlannedCommit]:
    """The commit plan: 70 kept, and drops at every stage plus pre-cutoff commits."""
    rng = random.Random(seed)
    t0 = datetime(2020, 2, 1, 9, 0, tzinfo=timezone.utc)
    plan: list[PlannedCommit] = []
    counter = [0]

    def tick() -> datetime:
        counter[0] += 1
        return t0 + timedelta(hours=7 * counter[0])

    def files_for(i: int, lang: str, n: int | None = None, k: int | None = None) -> tuple[dict[str, str], list[str]]:
        n = n if n is not None else i % 3 + 1
        files, names = {}, []
        for j in range(n):
            name = f"{_WORDS[(i + j) % len(_WORDS)]}_{i}_{j}"
            names.append(name)
            files[f"src/{lang.lower().replace('+', 'p')}/{name}{_EXT[lang]}"] = snippet(lang, name, k if k is not None else i + j)
        return files, names

    def human(i: int) -> tuple[str, str]:
        return _HUMANS[i % len(_HUMANS)]

    # pre-cutoff history, excluded by --since
    for i in range(5):
        files, names = files_for(900 + i, PYTHON, 1)
        plan.append(PlannedCommit(_normal_message(i, names, False), files, human(i),
                                  datetime(2019, 6, 1 + i, 12, tzinfo=timezone.utc), BEFORE_SINCE))
    # 70 clean commits
    for i in range(70):
        lang = _LANG_CYCLE[i % len(_LANG_CYCLE)]
        files, names = files_for(i, lang)
        plan.append(PlannedCommit(_normal_message(i, names, i % 2 == 0), files, human(i), tick(), KEPT,
                                  branch="side" if i == 33 else None))
    # 10 messages outside the grammar
    bad = [
        "update readme", "Add new parser", "feature: add cache", "fixed: typo in loader",
        "fix: ", "fix(scope: broken scope", "feat(): empty scope", "wip",
        "chore bump deps", "Merge pull request #12 from fork/branch",
    ]
    for i, msg in enumerate(bad):
        files, _ = files_for(100 + i, _LANG_CYCLE[i % 7])
        plan.append(PlannedCommit(msg, files, human(i), tick(), "ccs_format"))
    # 13 commits spanning languages or touching non-source files
    for i in range(10):
        a, b = _LANG_CYCLE[i % 7], _LANG_CYCLE[(i + 1) % 7]
        fa, na = files_for(200 + i, a, 1)
        fb, _ = files_for(250 + i, b, 1)
        plan.append(PlannedCommit(f"refactor: move {na[0]} helpers", {**fa, **fb}, human(i), tick(), "single_language"))
    for i in range(3):
        fa, na = files_for(300 + i, PYTHON, 1)
        fa[f"docs/notes_{i}.md"] = f"# Notes {i}\n\nSee {na[0]}.\n"
        plan.append(PlannedCommit(f"docs: describe {na[0]} usage", fa, human(i), tick(), "single_language"))
    # 11 bot or Robert authors
    for i, author in enumerate(_BOTS + _ROBERTS):
        files, names = files_for(400 + i, _LANG_CYCLE[i % 7])
        plan.append(PlannedCommit(f"build: bump {names[0]} pin", files, author, tick(), "bot"))
    # 6 stacked multi-type messages
    stacked = [
        "fix: handle nil\nfeat: add flag",
        "feat: add cache\n\nfix: broken import",
        "chore: bump deps\ndocs: update guide",
        "fix(parser): guard empty input\n  refactor: split tokenizer",
        "perf: faster index\ntest: add index benchmark\nci: run benchmarks",
        "fix: handle nil\nfix: handle nil again",
    ]
    for i, msg in enumerate(stacked):
        files, _ = files_for(500 + i, _LANG_CYCLE[i % 7])
        plan.append(PlannedCommit(msg, files, human(i), tick(), "multi_type"))
    # 6 size outliers
    long_desc = " ".join(rng.choice(_WORDS) for _ in range(70))
    big_py = "".join(f"def f{j}(x):\n    return x * {j}\n\n" for j in range(200))
    big_js = "".join(f"function g{j}(x) {{\n  return x - {j};\n}}\n" for j in range(100))
    outliers = [
        ("feat: add generated stubs", files_for(600, PYTHON, 40)[0]),
        ("feat: add vendored math table", {"src/python/table_600.py": big_py}),
        (f"docs: {long_desc}", files_for(601, GO, 1)[0]),
        ("feat: scaffold services", files_for(602, GO, 25)[0]),
        ("feat: add legacy shims", {"src/javascript/shim_600.js": big_js}),
        (f"fix: {' '.join(long_desc.split()[:50])}", files_for(603, JAVA, 2)[0]),
    ]
    for i, (msg, files) in enumerate(outliers):
        plan.append(PlannedCommit(msg, files, human(i), tick(), "outlier"))
    # interleave deterministically so stages are not contiguous in history
    head, tail = plan[:5], plan[5:]
    rng.shuffle(tail)
    for j, pc in enumerate(tail):
        pc.when = t0 + timedelta(hours=7 * (j + 1))
    return head + tail


def _git(repo: Path, *args: str, env: dict | None = None) -> str:
    full_env = {**os.environ, "GIT_CONFIG_NOSYSTEM": "1", "HOME": str(repo), **(env or {})}
    out = subprocess.run(["git", "-C", str(repo), *args], check=True, capture_output=True, env=full_env)
    return out.stdout.decode().strip()


def _commit(repo: Path, pc: PlannedCommit) -> str:
    for rel, text in pc.files.items():
        p = repo / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")
    _git(repo, "add", "-A")
    stamp = pc.when.strftime("%Y-%m-%dT%H:%M:%S+0000")
    env = {
        "GIT_AUTHOR_NAME": pc.author[0], "GIT_AUTHOR_EMAIL": pc.author[1], "GIT_AUTHOR_DATE": stamp,
        "GIT_COMMITTER_NAME": pc.author[0], "GIT_COMMITTER_EMAIL": pc.author[1], "GIT_COMMITTER_DATE": stamp,
    }
    _git(repo, "commit", "-q", "--allow-empty-message", "--no-verify", "-m", pc.message, env=env)
    return _git(repo, "rev-parse", "HEAD")


def build_filter_repo(path: str | Path, seed: int = 7) -> FilterRepo:
    """Create the labelled repository at ``path`` (must not exist or be empty)."""
    repo = Path(path)
    repo.mkdir(parents=True, exist_ok=True)
    _git(repo, "init", "-q", "-b", "main")
    _git(repo, "config", "commit.gpgsign", "false")
    out = FilterRepo(repo, since="2020-01-01")
    for pc in plan_filter_repo(seed):
        if pc.branch:
            _git(repo, "checkout", "-q", "-b", pc.branch)
            h = _commit(repo, pc)
            _git(repo, "checkout", "-q", "main")
            stamp = (pc.when + timedelta(minutes=30)).strftime("%Y-%m-%dT%H:%M:%S+0000")
            env = {"GIT_AUTHOR_NAME": "Alice Chen", "GIT_AUTHOR_EMAIL": "alice@example.org", "GIT_AUTHOR_DATE": stamp,
                   "GIT_COMMITTER_NAME": "Alice Chen", "GIT_COMMITTER_EMAIL": "alice@example.org",
                   "GIT_COMMITTER_DATE": stamp}
            _git(repo, "merge", "-q", "--no-ff", "-m", f"Merge branch '{pc.branch}'", pc.branch, env=env)
        else:
            h = _commit(repo, pc)
        out.hashes.append(h)
        out.expected[h] = pc.expect
    return out


# --- in-memory pools --------------------------------------------------------------

def _raw(repo_id: str, i: int, message: str, language: str, when: datetime) -> RawCommit:
    name = f"fn_{i}"
    path = f"src/{name}{_EXT[language]}"
    after = snippet(language, name, i)
    diff = "@@ -0,0 +1,%d @@\n" % after.count("\n") + "".join("+" + ln + "\n" for ln in after.splitlines())
    mod = FileModification.from_diff(None, path, diff, None, after)
    h = hashlib.sha1(f"{repo_id}:{i}".encode()).hexdigest()
    return RawCommit(repo_id, h, "Alice Chen", "alice@example.org", when, message, (mod,))


def type_pool(per_class: int = 200, repo_id: str = "pool/types", counts: dict[str, int] | None = None) -> list[AnnotatedCommit]:
    """``per_class`` commits of each type (or ``counts[type]``), languages cycling."""
    out = []
    t0 = datetime(2021, 1, 1, tzinfo=timezone.utc)
    i = 0
    for t in COMMIT_TYPES:
        for _ in range((counts or {}).get(t.value, per_class)):
            msg = CcsMessage(t, f"change fn_{i} behaviour")
            lang = _LANG_CYCLE[i % 7]
            raw = _raw(repo_id, i, format_message(msg), lang, t0 + timedelta(minutes=i))
            out.append(AnnotatedCommit(raw, ccs=msg, what_why=WhatWhyFlags(True, i % 2 == 0), verified=i % 5 != 0))
            i += 1
    return out


def language_pool(per_language: dict[str, int], state: str = "11", repo_id: str = "pool/langs") -> list[AnnotatedCommit]:
    """Commits per source language, all carrying the given what/why state."""
    out = []
    t0 = datetime(2021, 1, 1, tzinfo=timezone.utc)
    i = 0
    for lang, n in per_language.items():
        for _ in range(n):
            t = COMMIT_TYPES[i % 10]
            msg = CcsMessage(t, f"change fn_{i} to avoid drift")
            raw = _raw(repo_id, i, format_message(msg), lang, t0 + timedelta(minutes=i))
            out.append(AnnotatedCommit(raw, ccs=msg, what_why=WhatWhyFlags.from_state(state)))
            i += 1
    return out


def _rand_text(rng: random.Random, lo: int = 1, hi: int = 8) -> str:
    alphabet = "abcdefghijklmnopqrstuvwxyz _-.#/äé中"
    words = ["".join(rng.choice(alphabet) for _ in range(rng.randint(1, 7))).strip() or "x" for _ in range(rng.randint(lo, hi))]
    return " ".join(w.strip() or "x" for w in words).strip() or "x"


def random_annotated_commit(rng: random.Random, idx: int = 0) -> AnnotatedCommit:
    """Arbitrary but valid row, for serialization round-trips."""
    lang = rng.choice(SUPPORTED)
    t = rng.choice(COMMIT_TYPES)
    ccs = CcsMessage(
        t,
        _rand_text(rng),
        scope=rng.choice([None, _rand_text(rng, 1, 1).replace(" ", "")]) or None,
        breaking=rng.random() < 0.2,
        body=rng.choice([None, _rand_text(rng) + "\n\n" + _rand_text(rng)]),
        footers=tuple(("Refs", f"#{rng.randint(1, 999)}") for _ in range(rng.randint(0, 2))),
    )
    when = datetime(2020, 1, 1, tzinfo=timezone.utc) + timedelta(seconds=rng.randint(0, 10**8))
    raw = _raw(f"org{rng.randint(0, 9)}/repo", idx, format_message(ccs), lang, when)
    raw = RawCommit(raw.repo_id, f"{idx:040x}", _rand_text(rng, 1, 2), "a@b.c", when, raw.message,
                    raw.modifications, tuple(f"#{rng.randint(1, 99)}" for _ in range(rng.randint(0, 2))))
    kinds = [k for k in StructureKind if k is not StructureKind.FILE]
    changes = []
    for _ in range(rng.randint(0, 3)):
        ch = rng.choice([ADDED, DELETED, MODIFIED])
        a, b = rng.randint(1, 50), rng.randint(1, 50)
        span = (min(a, b), max(a, b))
        changes.append(StructuralChange(
            raw.modifications[0].path, lang, rng.choice(kinds), f"N{rng.randint(0, 99)}.m", ch,
            span if ch != ADDED else None, span if ch != DELETED else None))
    hunks = tuple(
        HunkContext((1, 0, 1, 3), ((rng.choice(kinds), "A"), (StructureKind.METHOD, "A.m")), "new", 2, raw.modifications[0].path)
        for _ in range(rng.randint(0, 2))
    )
    prov = FilterProvenance()
    for s in STAGES:
        prov.record(s, True, "ok")
    ww = rng.choice([None, WhatWhyFlags(rng.random() < 0.5, rng.random() < 0.5)])
    return AnnotatedCommit(raw, ccs, tuple(changes), hunks, ww, prov, rng.choice(["strict", "partial"]), rng.random() < 0.5)
