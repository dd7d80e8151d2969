"""AST-level structural change detection."""
from __future__ import annotations

from .diffing import ADDED, DELETED, MODIFIED, HunkContext, StructuralChange, diff_structures, map_hunks
from .extract import (
    KINDS_BY_LANGUAGE,
    Declaration,
    ParseFailure,
    StructureKind,
    extract_declarations,
)
from .grammars import manifest_digest, version_mismatches

__all__ = [
    "ADDED",
    "DELETED",
    "MODIFIED",
    "KINDS_BY_LANGUAGE",
    "Declaration",
    "HunkContext",
    "ParseFailure",
    "StructuralChange",
    "StructureKind",
    "diff_structures",
    "extract_declarations",
    "manifest_digest",
    "map_hunks",
    "version_mismatches",
]
