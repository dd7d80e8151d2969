"""Structural diffs between file versions and hunk-to-declaration mapping."""
from __future__ import annotations

from dataclasses import dataclass

from ..diffparse import parse_hunks
from .extract import Declaration, ParseFailure, StructureKind, extract_declarations

ADDED, DELETED, MODIFIED = "added", "deleted", "modified"


@dataclass(frozen=True)
class StructuralChange:
    file_path: str
    language: str
    kind: StructureKind
    qualified_name: str
    change: str
    span_before: tuple[int, int] | None
    span_after: tuple[int, int] | None

    def __post_init__(self) -> None:
        expect = {
            ADDED: (False, True),
            DELETED: (True, False),
            MODIFIED: (True, True),
        }[self.change]
        assert (self.span_before is not None, self.span_after is not None) == expect, self

    def key(self) -> tuple[str, str, str]:
        return (self.kind.value, self.qualified_name, self.change)

    def to_dict(self) -> dict:
        return {
            "file_path": self.file_path,
            "language": self.language,
            "kind": self.kind.value,
            "qualified_name": self.qualified_name,
            "change": self.change,
            "span_before": list(self.span_before) if self.span_before else None,
            "span_after": list(self.span_after) if self.span_after else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> StructuralChange:
        return cls(
            file_path=d["file_path"],
            language=d["language"],
            kind=StructureKind(d["kind"]),
            qualified_name=d["qualified_name"],
            change=d["change"],
            span_before=tuple(d["span_before"]) if d.get("span_before") else None,
            span_after=tuple(d["span_after"]) if d.get("span_after") else None,
        )


@dataclass(frozen=True)
class HunkContext:
    hunk: tuple[int, int, int, int]
    enclosing_chain: tuple[tuple[StructureKind, str], ...]
    side: str = "new"  # which file version the chain was resolved against
    first_changed_line: int | None = None
    file_path: str = ""

    @property
    def orphan(self) -> bool:
        return not self.enclosing_chain

    def to_dict(self) -> dict:
        return {
            "file_path": self.file_path,
            "hunk": list(self.hunk),
            "enclosing_chain": [[k.value, n] for k, n in self.enclosing_chain],
            "orphan": self.orphan,
            "side": self.side,
            "first_changed_line": self.first_changed_line,
        }

    @classmethod
    def from_dict(cls, d: dict) -> HunkContext:
        return cls(
            hunk=tuple(d["hunk"]),
            enclosing_chain=tuple((StructureKind(k), n) for k, n in d["enclosing_chain"]),
            side=d.get("side", "new"),
            first_changed_line=d.get("first_changed_line"),
            file_path=d.get("file_path", ""),
        )


def _line_count(text: str) -> int:
    return max(1, text.count("\n") + (0 if text.endswith("\n") else 1))


def _file_level(before: str | None, after: str | None, language: str, path: str) -> list[StructuralChange]:
    change = ADDED if before is None else DELETED if after is None else MODIFIED
    if change == MODIFIED and before == after:
        return []
    return [
        StructuralChange(
            file_path=path,
            language=language,
            kind=StructureKind.FILE,
            qualified_name="<file>",
            change=change,
            span_before=(1, _line_count(before)) if before is not None else None,
            span_after=(1, _line_count(after)) if after is not None else None,
        )
    ]


def diff_structures(
    before: str | None, after: str | None, language: str, file_path: str = ""
) -> list[StructuralChange]:
    """Added/deleted/modified declarations between two versions of one file.

    Declarations are matched on ``(kind, qualified_name)``; a matched pair is
    *modified* when the spanned source text differs. Results are ordered by
    their line position (after-side span when present, else before-side).
    If either side cannot be parsed, a single ``File``-kind record is returned.
    """
    if before is None and after is None:
        raise ValueError("diff_structures needs at least one file version")
    try:
        old = extract_declarations(before, language, file_path) if before is not None else []
        new = extract_declarations(after, language, file_path) if after is not None else []
    except ParseFailure:
        return _file_level(before, after, language, file_path)
    old_map = {(d.kind, d.qualified_name): d for d in old}
    new_map = {(d.kind, d.qualified_name): d for d in new}
    out: list[StructuralChange] = []
    for key, d in old_map.items():
        n = new_map.get(key)
        if n is None:
            out.append(StructuralChange(file_path, language, d.kind, d.qualified_name, DELETED, d.span, None))
        elif n.text != d.text:
            out.append(StructuralChange(file_path, language, d.kind, d.qualified_name, MODIFIED, d.span, n.span))
    for key, n in new_map.items():
        if key not in old_map:
            out.append(StructuralChange(file_path, language, n.kind, n.qualified_name, ADDED, None, n.span))
    out.sort(key=lambda c: ((c.span_after or c.span_before)[0], c.qualified_name, c.kind.value, c.change))
    return out


def _chain_at(line: int, decls: list[Declaration]) -> tuple[tuple[StructureKind, str], ...]:
    hits = [d for d in decls if d.span[0] <= line <= d.span[1]]
    hits.sort(key=lambda d: (d.depth, d.span[0], -d.span[1]))
    return tuple((d.kind, d.qualified_name) for d in hits)


def map_hunks(
    unified_diff: str,
    declarations_before: list[Declaration],
    declarations_after: list[Declaration],
    file_path: str = "",
) -> list[HunkContext]:
    """Enclosing-declaration chain (outermost first) for every hunk.

    A hunk with added lines is resolved on the new side at its first added
    line; a pure deletion is resolved on the old side at its first deleted
    line. When the changed range runs past the end of a declaration, the
    declarations containing that first changed line still win.
    """
    out = []
    for h in parse_hunks(unified_diff):
        if h.added:
            side, line, decls = "new", h.added[0], declarations_after
        elif h.deleted:
            side, line, decls = "old", h.deleted[0], declarations_before
        else:
            out.append(HunkContext(h.header, (), "new", None, file_path))
            continue
        out.append(HunkContext(h.header, _chain_at(line, decls), side, line, file_path))
    return out
