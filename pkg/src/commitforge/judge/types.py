"""Judge configuration, verdict records and errors."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

BACKENDS = ("chat_endpoint", "rule_based")
BINARY_METRICS = ("rationality", "comprehensiveness", "non_redundancy", "authenticity", "logicality")
RULE_BASED_VERSION = "1"


class JudgeError(RuntimeError):
    pass


class EndpointUnreachable(JudgeError):
    pass


class UnparseableReply(JudgeError):
    def __init__(self, message: str, content: str = ""):
        super().__init__(message)
        self.content = content


class VerdictIncomplete(UnparseableReply):
    pass


@dataclass
class JudgeConfig:
    backend: str = "rule_based"
    endpoint_url: str = "http://127.0.0.1:8000/v1"
    model_name: str = "deepseek-chat"
    temperature: float = 0.0
    max_retries: int = 3
    requests_per_minute: int = 60
    cache_dir: Path | None = None
    # what/why annotation without diff context
    message_only: bool = False
    timeout_s: float = 60.0

    def __post_init__(self) -> None:
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown judge backend {self.backend!r}; expected one of {BACKENDS}")
        if self.requests_per_minute < 1:
            raise ValueError("requests_per_minute must be at least 1")
        if self.max_retries < 0:
            raise ValueError("max_retries must be nonnegative")
        if self.cache_dir is not None:
            self.cache_dir = Path(self.cache_dir)

    @property
    def judge_id(self) -> str:
        if self.backend == "rule_based":
            return f"rule_based/{RULE_BASED_VERSION}"
        return f"chat_endpoint/{self.model_name}"

    def to_dict(self) -> dict:
        return {
            "backend": self.backend,
            "endpoint_url": self.endpoint_url,
            "model_name": self.model_name,
            "temperature": self.temperature,
            "max_retries": self.max_retries,
            "requests_per_minute": self.requests_per_minute,
            "cache_dir": str(self.cache_dir) if self.cache_dir else None,
            "message_only": self.message_only,
            "timeout_s": self.timeout_s,
        }


@dataclass(frozen=True)
class WhatWhyFlags:
    has_what: bool
    has_why: bool

    @property
    def state(self) -> str:
        """Two-character code: first digit is what, second is why ("10" = what only)."""
        return f"{int(self.has_what)}{int(self.has_why)}"

    @classmethod
    def from_state(cls, state: str) -> WhatWhyFlags:
        if state not in ("00", "01", "10", "11"):
            raise ValueError(f"bad what/why state {state!r}")
        return cls(state[0] == "1", state[1] == "1")

    def to_dict(self) -> dict:
        return {"has_what": self.has_what, "has_why": self.has_why, "state": self.state}

    @classmethod
    def from_dict(cls, d: dict) -> WhatWhyFlags:
        flags = cls(bool(d["has_what"]), bool(d["has_why"]))
        if "state" in d and d["state"] != flags.state:
            raise ValueError(f"inconsistent what/why state {d['state']!r} for {flags}")
        return flags


@dataclass(frozen=True)
class BinaryVerdict:
    rationality: bool
    comprehensiveness: bool
    non_redundancy: bool
    authenticity: bool  # true = no fabricated modifications
    logicality: bool
    rationale_text: dict[str, str] = field(default_factory=dict, hash=False)
    judge_id: str = ""
    prompt_hash: str = ""
    # reserved for a 5-point expressiveness score; never filled by the shipped backends
    expressiveness: int | None = None

    def scores(self) -> dict[str, bool]:
        return {m: getattr(self, m) for m in BINARY_METRICS}

    def to_dict(self) -> dict:
        d: dict = self.scores()
        d.update(
            rationale_text=dict(self.rationale_text),
            judge_id=self.judge_id,
            prompt_hash=self.prompt_hash,
            expressiveness=self.expressiveness,
        )
        return d

    @classmethod
    def from_dict(cls, d: dict) -> BinaryVerdict:
        missing = [m for m in BINARY_METRICS if m not in d]
        if missing:
            raise VerdictIncomplete(f"verdict lacks {', '.join(missing)}")
        return cls(
            **{m: bool(d[m]) for m in BINARY_METRICS},
            rationale_text=dict(d.get("rationale_text") or {}),
            judge_id=d.get("judge_id", ""),
            prompt_hash=d.get("prompt_hash", ""),
            expressiveness=d.get("expressiveness"),
        )
