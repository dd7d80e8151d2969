"""Conventional Commits grammar: parsing, formatting and multi-type detection.

Header grammar accepted by :func:`parse_message`::

    <type>[(<scope>)][!]:<spaces><description>

``type`` is matched case-insensitively and canonicalised to lowercase. The
scope may contain anything except ``(``, ``)``, ``:`` and newlines. At least
one space or tab must follow the colon. CRLF line endings are normalised to LF
before parsing.

The body starts after the header (normally separated by one blank line).
The footer block is the final paragraph of the message when its first line
is a ``Token: value`` or ``Token #value`` trailer; non-trailer lines inside
that paragraph continue the previous footer's value.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum


class CommitType(str, Enum):
    FEAT = "feat"
    FIX = "fix"
    PERF = "perf"
    STYLE = "style"
    REFACTOR = "refactor"
    DOCS = "docs"
    TEST = "test"
    CI = "ci"
    BUILD = "build"
    CHORE = "chore"

    def __str__(self) -> str:
        return self.value


COMMIT_TYPES: tuple[CommitType, ...] = tuple(CommitType)

# one-line summaries of the ten-category taxonomy, used in prompts and docs
TYPE_DESCRIPTIONS: dict[CommitType, str] = {
    CommitType.FEAT: "new feature",
    CommitType.FIX: "bug fix",
    CommitType.PERF: "performance improvement (speed, memory)",
    CommitType.STYLE: "readability/formatting change without behaviour change",
    CommitType.REFACTOR: "restructuring without behaviour change",
    CommitType.DOCS: "documentation or comments",
    CommitType.TEST: "adding or updating tests",
    CommitType.CI: "CI configuration or scripts",
    CommitType.BUILD: "build system or dependencies",
    CommitType.CHORE: "miscellaneous changes",
}

NON_COMPLIANCE_REASONS = ("missing-colon", "unknown-type", "empty-description", "malformed-scope")

_TYPE_WORD = re.compile(r"[A-Za-z]+")
_SCOPE = re.compile(r"\(([^()\n:]*)\)")
_FOOTER = re.compile(r"^(BREAKING CHANGE|BREAKING-CHANGE|[A-Za-z][A-Za-z0-9-]*)(?:: (.*)| (#.*))$")
_TYPE_ALTS = "|".join(t.value for t in COMMIT_TYPES)
_HEADER_POSITION = re.compile(
    rf"^[ \t]*({_TYPE_ALTS})(?:\([^()\n:]*\))?!?:", re.IGNORECASE | re.MULTILINE
)


class NonCompliant(ValueError):
    """Raised when a message does not follow the Conventional Commits header grammar."""

    def __init__(self, reason: str, detail: str = ""):
        assert reason in NON_COMPLIANCE_REASONS, reason
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


@dataclass(frozen=True)
class CcsMessage:
    type: CommitType
    description: str
    scope: str | None = None
    breaking: bool = False
    body: str | None = None
    footers: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "type": self.type.value,
            "scope": self.scope,
            "breaking": self.breaking,
            "description": self.description,
            "body": self.body,
            "footers": [list(f) for f in self.footers],
        }

    @classmethod
    def from_dict(cls, d: dict) -> CcsMessage:
        return cls(
            type=CommitType(d["type"]),
            scope=d.get("scope"),
            breaking=bool(d.get("breaking", False)),
            description=d["description"],
            body=d.get("body"),
            footers=tuple((k, v) for k, v in d.get("footers", [])),
        )


@dataclass(frozen=True)
class ComplianceVerdict:
    status: str  # compliant | non_compliant | multi_type
    matched_types: tuple[CommitType, ...] = ()
    reason: str | None = None


def _parse_header(header: str) -> tuple[CommitType, str | None, bool, str]:
    m = _TYPE_WORD.match(header)
    if m is None:
        raise NonCompliant("missing-colon", "no type prefix")
    word, pos = m.group(0), m.end()
    scope = None
    if pos < len(header) and header[pos] == "(":
        sm = _SCOPE.match(header, pos)
        if sm is None or not sm.group(1):
            raise NonCompliant("malformed-scope", header)
        scope, pos = sm.group(1), sm.end()
    breaking = header.startswith("!", pos)
    if breaking:
        pos += 1
    if not header.startswith(":", pos):
        raise NonCompliant("missing-colon", header)
    rest = header[pos + 1:]
    description = rest.strip(" \t")
    if rest and rest[0] not in " \t" and description:
        raise NonCompliant("missing-colon", "colon must be followed by whitespace")
    try:
        ctype = CommitType(word.lower())
    except ValueError:
        raise NonCompliant("unknown-type", word) from None
    if not description.strip():
        raise NonCompliant("empty-description")
    return ctype, scope, breaking, description.strip()


def _split_footers(lines: list[str]) -> tuple[list[str], tuple[tuple[str, str], ...]]:
    # footer block = last paragraph, if it opens with a trailer line
    last_blank = max((i for i, ln in enumerate(lines) if not ln.strip()), default=-1)
    para = lines[last_blank + 1:]
    if not para or not _FOOTER.match(para[0]):
        return lines, ()
    footers: list[list[str]] = []
    for ln in para:
        fm = _FOOTER.match(ln)
        if fm:
            footers.append([fm.group(1), fm.group(2) if fm.group(2) is not None else fm.group(3)])
        else:
            footers[-1][1] += "\n" + ln
    return lines[: max(last_blank, 0)], tuple((k, v) for k, v in footers)


def parse_message(raw: str) -> CcsMessage:
    """Parse a full commit message; raise :class:`NonCompliant` on failure."""
    text = raw.replace("\r\n", "\n").replace("\r", "\n")
    lines = text.split("\n")
    ctype, scope, breaking, description = _parse_header(lines[0])
    rest = lines[1:]
    body_lines, footers = _split_footers(rest)
    body = "\n".join(body_lines).strip("\n")
    return CcsMessage(
        type=ctype,
        scope=scope,
        breaking=breaking,
        description=description,
        body=body if body.strip() else None,
        footers=footers,
    )


def format_message(msg: CcsMessage) -> str:
    header = msg.type.value
    if msg.scope is not None:
        header += f"({msg.scope})"
    if msg.breaking:
        header += "!"
    parts = [f"{header}: {msg.description}"]
    if msg.body:
        parts.append(msg.body)
    if msg.footers:
        parts.append(
            "\n".join(f"{k} {v}" if v.startswith("#") else f"{k}: {v}" for k, v in msg.footers)
        )
    return "\n\n".join(parts)


def detect_multi_type(raw: str) -> ComplianceVerdict:
    """Count line-initial ``<type>:`` / ``<type>(scope):`` headers anywhere in the message.

    Two or more occurrences make the message multi-type; otherwise the verdict
    reflects whether the header parses.
    """
    text = raw.replace("\r\n", "\n")
    matched = tuple(CommitType(m.group(1).lower()) for m in _HEADER_POSITION.finditer(text))
    if len(matched) >= 2:
        return ComplianceVerdict("multi_type", matched)
    try:
        parse_message(text)
    except NonCompliant as exc:
        return ComplianceVerdict("non_compliant", matched, exc.reason)
    return ComplianceVerdict("compliant", matched)
