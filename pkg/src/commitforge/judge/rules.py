"""Deterministic rule-based judge.

This backend is a testing oracle that keeps the pipeline runnable offline. It
is not a research-grade judge and its verdicts should not be reported as such.

What
    The message (description and body) mentions at least one changed file stem
    (``parser`` for ``src/parser.py``) or changed declaration name. Declaration
    names come from the AST changes when available and from the function
    context git prints on each hunk header. Dotted names also match
    on their last segment.
Why
    The message contains one of :data:`CAUSAL_MARKERS` (case-insensitive, word
    bounded), or an issue-closing reference such as ``fixes #12``.
"""
from __future__ import annotations

import re
from pathlib import PurePosixPath

from ..ccs import NonCompliant, parse_message
from ..tokens import tokenize
from .prompts import JudgeContext
from .types import BinaryVerdict, WhatWhyFlags

CAUSAL_MARKERS = (
    "because",
    "so that",
    "in order to",
    "to avoid",
    "to prevent",
    "to allow",
    "to ensure",
    "to support",
    "due to",
    "caused by",
    "otherwise",
    "as a result",
    "which caused",
    "which broke",
)
_CAUSAL_RE = re.compile(r"\b(" + "|".join(re.escape(m) for m in CAUSAL_MARKERS) + r")\b", re.I)
_ISSUE_RE = re.compile(r"\b(fix(e[sd])?|close[sd]?|resolve[sd]?)\s+#\d+", re.I)
_HUNK_CONTEXT_RE = re.compile(r"^@@[^@]*@@\s*(.*)$", re.M)
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
# identifiers that look like code: snake_case, camelCase, dotted paths, file names
_CODEISH_RE = re.compile(
    r"`([^`]+)`|\b([A-Za-z_]\w*_\w+|[a-z]+[A-Z]\w*|\w+\.(?:py|js|ts|tsx|jsx|go|java|c|h|cc|cpp|hpp|cxx))\b"
)
_STOP = frozenset("a an the of to in on for and or is it be by with this that from".split())


def has_why(text: str) -> bool:
    return bool(_CAUSAL_RE.search(text) or _ISSUE_RE.search(text))


def _file_stems(ctx: JudgeContext) -> dict[str, set[str]]:
    """path -> lowercase names that count as mentioning that file."""
    out: dict[str, set[str]] = {}
    for path, diff in ctx.diffs:
        p = PurePosixPath(path)
        names = {p.stem.lower(), p.name.lower()}
        for m in _HUNK_CONTEXT_RE.finditer(diff):
            for ident in _IDENT_RE.findall(m.group(1)):
                if len(ident) > 2 and ident.lower() not in _KEYWORDS:
                    names.add(ident.lower())
        out[path] = {n for n in names if n}
    for path, name in ctx.declaration_names:
        base = name.split("#")[0]
        parts = {s.lower() for s in (base, base.split(".")[-1]) if s and "<" not in s}
        for target in [path] if path in out else list(out):
            out[target] |= parts
    return out


# words git hunk headers commonly carry that are not names
_KEYWORDS = frozenset(
    "def class func function static public private protected void int return async const let var "
    "struct enum interface namespace export default package import type final abstract".split()
)


def _mentions(text: str, names: set[str]) -> bool:
    tokens = set(tokenize(text, lower=True))
    low = text.lower()
    for n in names:
        if n in tokens or ("." in n and n in low):
            return True
    return False


def _message_text(message: str) -> str:
    try:
        m = parse_message(message)
    except NonCompliant:
        return message
    return "\n".join(x for x in (m.description, m.body or "") if x)


def annotate(ctx: JudgeContext, message_only: bool = False) -> WhatWhyFlags:
    text = _message_text(ctx.message)
    if message_only:
        names: set[str] = set()
        for path, _ in ctx.diffs:
            names.add(PurePosixPath(path).stem.lower())
        what = _mentions(text, names) if names else False
    else:
        stems = _file_stems(ctx)
        what = any(_mentions(text, names) for names in stems.values())
    return WhatWhyFlags(has_what=what, has_why=has_why(ctx.message))


def _redundant(text: str) -> bool:
    sentences = [s.strip().lower() for s in re.split(r"[.\n!?]+", text) if s.strip()]
    if len(sentences) != len(set(sentences)):
        return True
    words = [w for w in tokenize(text, lower=True) if w.isalnum() and w not in _STOP]
    grams = [tuple(words[i:i + 3]) for i in range(len(words) - 2)]
    return len(grams) != len(set(grams))


def _fabricated(text: str, ctx: JudgeContext) -> list[str]:
    corpus = "\n".join(p + "\n" + d for p, d in ctx.diffs).lower()
    corpus += "\n" + "\n".join(n for _, n in ctx.declaration_names).lower()
    out = []
    for m in _CODEISH_RE.finditer(text):
        ident = (m.group(1) or m.group(2)).strip()
        if ident and ident.lower() not in corpus:
            out.append(ident)
    return out


def _logical(message: str) -> bool:
    first = message.strip().splitlines()[0] if message.strip() else ""
    try:
        desc = parse_message(message).description
    except NonCompliant:
        desc = first
    words = [w for w in tokenize(desc) if w.isalpha()]
    return len(words) >= 2


def evaluate(ctx: JudgeContext, candidate: str, judge_id: str = "", prompt_hash: str = "") -> BinaryVerdict:
    text = _message_text(candidate)
    stems = _file_stems(ctx)
    uncovered = sorted(p for p, names in stems.items() if not _mentions(text, names))
    fabricated = _fabricated(candidate, ctx)
    why = has_why(candidate)
    redundant = _redundant(text)
    logical = _logical(candidate)
    rationales = {
        "rationality": "causal marker present" if why else "no causal marker",
        "comprehensiveness": "all files mentioned" if not uncovered else "not mentioned: " + ", ".join(uncovered),
        "non_redundancy": "repeated content" if redundant else "no repetition found",
        "authenticity": "unknown identifiers: " + ", ".join(fabricated) if fabricated else "all identifiers found in diff",
        "logicality": "description has at least two words" if logical else "description too short to be coherent",
    }
    return BinaryVerdict(
        rationality=why,
        comprehensiveness=bool(stems) and not uncovered,
        non_redundancy=not redundant,
        authenticity=not fabricated,
        logicality=logical,
        rationale_text=rationales,
        judge_id=judge_id,
        prompt_hash=prompt_hash,
    )
