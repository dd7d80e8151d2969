"""Tree-sitter grammar loading, pinned by ``grammars.json``."""
from __future__ import annotations

import hashlib
import importlib
import importlib.metadata
import json
import threading
from functools import lru_cache
from importlib import resources

import tree_sitter

from ..languages import TYPESCRIPT

_local = threading.local()


@lru_cache(maxsize=1)
def manifest() -> dict:
    return json.loads(resources.files(__package__).joinpath("grammars.json").read_text())


def manifest_digest() -> str:
    data = resources.files(__package__).joinpath("grammars.json").read_bytes()
    return hashlib.sha256(data).hexdigest()


def version_mismatches() -> list[str]:
    """Installed grammar packages whose version differs from the manifest pin."""
    m = manifest()
    pins = {"tree-sitter": m["tree-sitter"]}
    pins.update({g["package"]: g["version"] for g in m["grammars"].values()})
    out = []
    for pkg, want in sorted(pins.items()):
        try:
            have = importlib.metadata.version(pkg)
        except importlib.metadata.PackageNotFoundError:
            have = None
        if have != want:
            out.append(f"{pkg}: pinned {want}, installed {have}")
    return out


def grammar_key(language: str, path: str | None = None) -> str:
    if language == TYPESCRIPT and path and path.lower().endswith(".tsx"):
        return "TSX"
    return language


@lru_cache(maxsize=None)
def _language(key: str) -> tree_sitter.Language:
    entry = manifest()["grammars"][key]
    mod = importlib.import_module(entry["module"])
    return tree_sitter.Language(getattr(mod, entry["entry"])())


def get_parser(language: str, path: str | None = None) -> tree_sitter.Parser:
    """A parser for ``language``; one instance per thread and grammar."""
    key = grammar_key(language, path)
    cache = getattr(_local, "parsers", None)
    if cache is None:
        cache = _local.parsers = {}
    if key not in cache:
        cache[key] = tree_sitter.Parser(_language(key))
    return cache[key]
