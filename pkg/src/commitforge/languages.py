"""File-extension language detection for the seven supported languages."""
from __future__ import annotations

from pathlib import PurePosixPath

C = "C"
CPP = "C++"
JAVA = "Java"
PYTHON = "Python"
GO = "Go"
JAVASCRIPT = "JavaScript"
TYPESCRIPT = "TypeScript"
OTHER = "other"

SUPPORTED = (C, CPP, JAVA, PYTHON, GO, JAVASCRIPT, TYPESCRIPT)

EXTENSIONS = {
    ".c": C,
    ".h": C,
    ".cc": CPP,
    ".cpp": CPP,
    ".hpp": CPP,
    ".cxx": CPP,
    ".java": JAVA,
    ".py": PYTHON,
    ".go": GO,
    ".js": JAVASCRIPT,
    ".jsx": JAVASCRIPT,
    ".mjs": JAVASCRIPT,
    ".ts": TYPESCRIPT,
    ".tsx": TYPESCRIPT,
}


def detect_language(path: str | None) -> str:
    if not path:
        return OTHER
    return EXTENSIONS.get(PurePosixPath(path).suffix.lower(), OTHER)


def quota_group(language: str) -> str:
    """Evaluation-quota group: C and C++ share one bucket."""
    return "C/C++" if language in (C, CPP) else language
