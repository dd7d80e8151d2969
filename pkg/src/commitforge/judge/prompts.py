"""Versioned prompt templates and the judge context they are rendered from.

Templates live in ``prompts/*.txt``: a ``version: X.Y.Z`` line, a ``---``
separator, then a :class:`string.Template` body. The version is folded into
every prompt hash so verdicts from different template revisions never mix.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from string import Template
from typing import Any, Sequence

MAX_DIFF_CHARS = 12000  # per file, keeps prompts within common context windows


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    version: str
    body: Template

    def render(self, **values: str) -> str:
        return self.body.substitute(**values)


@lru_cache(maxsize=None)
def load_template(name: str) -> PromptTemplate:
    text = resources.files("commitforge.judge").joinpath("prompts", f"{name}.txt").read_text("utf-8")
    head, sep, body = text.partition("\n---\n")
    if not sep or not head.startswith("version:"):
        raise ValueError(f"prompt template {name!r} lacks a version header")
    return PromptTemplate(name, head.split(":", 1)[1].strip(), Template(body))


@dataclass(frozen=True)
class JudgeContext:
    """Everything a judge may look at for one commit."""

    message: str = ""
    diffs: tuple[tuple[str, str], ...] = ()  # (path, unified diff)
    linked_refs: tuple[str, ...] = ()
    ast_changes: tuple[str, ...] = ()  # rendered one per line
    declaration_names: tuple[tuple[str, str], ...] = field(default=(), compare=False)  # (path, name)

    @classmethod
    def from_commit(cls, commit: Any, ast_changes: Sequence | None = None) -> JudgeContext:
        """Build from a RawCommit or AnnotatedCommit (duck-typed)."""
        raw = getattr(commit, "raw", commit)
        if ast_changes is None:
            ast_changes = getattr(commit, "ast_changes", None) or ()
        rendered = tuple(
            f"{c.change} {c.kind.value} {c.qualified_name} ({c.file_path})" for c in ast_changes
        )
        names = tuple(sorted({(c.file_path, c.qualified_name) for c in ast_changes}))
        return cls(
            message=raw.message,
            diffs=tuple((m.path, m.unified_diff) for m in raw.modifications),
            linked_refs=tuple(raw.linked_refs) + tuple(getattr(raw, "comments", ()) or ()),
            ast_changes=rendered,
            declaration_names=names,
        )

    def render_diffs(self) -> str:
        if not self.diffs:
            return "(none)"
        parts = []
        for path, diff in self.diffs:
            body = diff if len(diff) <= MAX_DIFF_CHARS else diff[:MAX_DIFF_CHARS] + "\n[... truncated]"
            parts.append(f"### {path}\n```diff\n{body.rstrip()}\n```")
        return "\n\n".join(parts)

    def render_refs(self) -> str:
        return "\n".join(f"- {r}" for r in self.linked_refs) or "(none)"

    def render_ast(self) -> str:
        return "\n".join(f"- {a}" for a in self.ast_changes) or "(none)"


def binary_prompt(ctx: JudgeContext, candidate: str) -> tuple[PromptTemplate, str]:
    tpl = load_template("binary_v1")
    text = tpl.render(
        diffs=ctx.render_diffs(), refs=ctx.render_refs(), ast=ctx.render_ast(), candidate=candidate.strip()
    )
    return tpl, text


def what_why_prompt(ctx: JudgeContext, message_only: bool = False) -> tuple[PromptTemplate, str]:
    tpl = load_template("what_why_v1")
    diffs = "(not shown)" if message_only else ctx.render_diffs()
    return tpl, tpl.render(message=ctx.message.strip(), diffs=diffs)


def repair_prompt(problem: str, keys: Sequence[str]) -> str:
    return load_template("repair_v1").render(problem=problem, keys=", ".join(keys))


def prompt_hash(template: PromptTemplate, prompt: str, judge_id: str, model: str, temperature: float) -> str:
    payload = {
        "template": template.name,
        "version": template.version,
        "judge_id": judge_id,
        "model": model,
        "temperature": temperature,
        "prompt": prompt,
    }
    blob = json.dumps(payload, sort_keys=True, ensure_ascii=False).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()
