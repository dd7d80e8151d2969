"""The AnnotatedCommit row and its flat JSON form."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

from ..ast_change import HunkContext, StructuralChange
from ..ccs import CcsMessage, CommitType
from ..filters import FilterProvenance
from ..judge import WhatWhyFlags
from ..languages import OTHER
from ..miner import RawCommit

TIERS = ("strict", "partial")
_RAW_KEYS = ("repo_id", "hash", "author_name", "author_email", "timestamp", "message",
             "modifications", "linked_refs", "comments")


@dataclass(frozen=True)
class AnnotatedCommit:
    """A mined commit plus everything later stages attach to it.

    Every stage reads and writes this one row type; fields a stage has not
    reached yet stay empty (``ccs`` None before filtering, ``what_why`` None
    before annotation).
    """

    raw: RawCommit
    ccs: CcsMessage | None = None
    ast_changes: tuple[StructuralChange, ...] = ()
    hunk_contexts: tuple[HunkContext, ...] = ()
    what_why: WhatWhyFlags | None = None
    provenance: FilterProvenance = field(default_factory=FilterProvenance)
    compliance_tier: str = "strict"
    # label vetted by a human pass; gates sample_ten_eval(verified_only=True)
    verified: bool = False

    def __post_init__(self) -> None:
        if self.compliance_tier not in TIERS:
            raise ValueError(f"compliance_tier must be one of {TIERS}, got {self.compliance_tier!r}")

    @property
    def key(self) -> tuple[str, str]:
        return (self.raw.repo_id, self.raw.hash)

    @property
    def message(self) -> str:
        return self.raw.message

    @property
    def modifications(self):
        return self.raw.modifications

    @property
    def gold_type(self) -> CommitType | None:
        return self.ccs.type if self.ccs else None

    @property
    def language(self) -> str | None:
        """The single source language touched, or None if zero or several."""
        langs = {m.language for m in self.raw.modifications} - {OTHER}
        return next(iter(langs)) if len(langs) == 1 else None

    def with_(self, **changes: Any) -> AnnotatedCommit:
        return replace(self, **changes)

    def to_dict(self) -> dict:
        d = self.raw.to_dict()
        d.update(
            ccs=self.ccs.to_dict() if self.ccs else None,
            ast_changes=[c.to_dict() for c in self.ast_changes],
            hunk_contexts=[h.to_dict() for h in self.hunk_contexts],
            what_why=self.what_why.to_dict() if self.what_why else None,
            provenance=self.provenance.to_dict(),
            compliance_tier=self.compliance_tier,
            verified=self.verified,
        )
        return d

    @classmethod
    def from_dict(cls, d: dict) -> AnnotatedCommit:
        raw = RawCommit.from_dict({k: d[k] for k in _RAW_KEYS if k in d})
        return cls(
            raw=raw,
            ccs=CcsMessage.from_dict(d["ccs"]) if d.get("ccs") else None,
            ast_changes=tuple(StructuralChange.from_dict(c) for c in d.get("ast_changes", [])),
            hunk_contexts=tuple(HunkContext.from_dict(h) for h in d.get("hunk_contexts", [])),
            what_why=WhatWhyFlags.from_dict(d["what_why"]) if d.get("what_why") else None,
            provenance=FilterProvenance.from_dict(d.get("provenance") or {}),
            compliance_tier=d.get("compliance_tier", "strict"),
            verified=bool(d.get("verified", False)),
        )

    @classmethod
    def from_raw(cls, raw: RawCommit, compliance_tier: str = "strict") -> AnnotatedCommit:
        return cls(raw=raw, compliance_tier=compliance_tier)


def project_type_description(commit: AnnotatedCommit) -> dict[str, str]:
    """Type and description only; the scope is dropped."""
    if commit.ccs is None:
        raise ValueError(f"commit {commit.raw.hash} has no parsed message")
    return {"type": commit.ccs.type.value, "description": commit.ccs.description}
