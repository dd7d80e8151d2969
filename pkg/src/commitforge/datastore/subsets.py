"""Evaluation-subset samplers.

Sampling algorithm (fixed, version independent): every eligible commit gets
the rank ``sha256(f"{seed}:{subset_id}:{repo_id}:{hash}")`` and each stratum
keeps its ``k`` lowest ranks. Nothing depends on Python's ``random`` module or
on input order, so the same (pool, parameters, seed) always yields the same
members.
"""
from __future__ import annotations

import hashlib
import json
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from ..ccs import COMMIT_TYPES
from ..languages import quota_group
from .records import AnnotatedCommit

SUBSET_IDS = ("D_all", "D_cmg", "D_ten", "D_human", "D_ast_cmg", "D_ast_ten")
PARENT = {
    "D_all": None,
    "D_cmg": "D_all",
    "D_ten": "D_all",
    "D_human": "D_cmg",
    "D_ast_cmg": "D_cmg",
    "D_ast_ten": "D_ten",
}
DEFAULT_PER_CLASS = 116
DEFAULT_CMG_QUOTAS = {
    "C/C++": 180,
    "Java": 102,
    "Python": 180,
    "Go": 180,
    "JavaScript": 179,
    "TypeScript": 179,
}
DEFAULT_SIZES = {"D_human": 300, "D_ast_cmg": 200, "D_ast_ten": 200}

Key = tuple[str, str]


class InsufficientPopulation(ValueError):
    def __init__(self, subset_id: str, shortfalls: Mapping[str, tuple[int, int]]):
        self.subset_id = subset_id
        self.shortfalls = dict(shortfalls)  # stratum -> (available, needed)
        parts = [f"{k} has {a} eligible, needs {n} (shortfall {n - a})" for k, (a, n) in sorted(shortfalls.items())]
        super().__init__(f"insufficient population for {subset_id}: " + "; ".join(parts))


class NestingViolation(ValueError):
    pass


@dataclass
class DatasetSubset:
    id: str
    member_keys: list[Key]
    seed: int
    construction_params: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.id not in SUBSET_IDS:
            raise ValueError(f"unknown subset id {self.id!r}")
        self.member_keys = sorted((str(r), str(h)) for r, h in self.member_keys)

    @property
    def parent(self) -> str | None:
        return PARENT[self.id]

    def __len__(self) -> int:
        return len(self.member_keys)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "parent": self.parent,
            "seed": self.seed,
            "construction_params": dict(sorted(self.construction_params.items())),
            "size": len(self.member_keys),
            "member_keys": [list(k) for k in self.member_keys],
        }

    @classmethod
    def from_dict(cls, d: dict) -> DatasetSubset:
        return cls(d["id"], [tuple(k) for k in d["member_keys"]], int(d["seed"]), dict(d.get("construction_params", {})))

    def select(self, commits: Iterable[AnnotatedCommit]) -> list[AnnotatedCommit]:
        wanted = set(self.member_keys)
        return [c for c in commits if c.key in wanted]


def check_nesting(subset: DatasetSubset, parent_keys: Iterable[Key], parent_id: str | None = None) -> None:
    if parent_id is not None and subset.parent is not None and parent_id != subset.parent:
        raise NestingViolation(f"{subset.id} must be drawn from {subset.parent}, not {parent_id}")
    parent = set(map(tuple, parent_keys))
    stray = [k for k in subset.member_keys if k not in parent]
    if stray:
        raise NestingViolation(f"{subset.id} has {len(stray)} member(s) outside its parent, e.g. {stray[0]}")


def write_subset(path: str | Path, subset: DatasetSubset, parent_keys: Iterable[Key], parent_id: str | None = None) -> None:
    """Persist a subset after checking it nests inside its parent."""
    check_nesting(subset, parent_keys, parent_id)
    Path(path).write_text(json.dumps(subset.to_dict(), indent=1, sort_keys=True) + "\n", "utf-8")


def read_subset(path: str | Path) -> DatasetSubset:
    return DatasetSubset.from_dict(json.loads(Path(path).read_text("utf-8")))


def rank(seed: int, subset_id: str, key: Key) -> str:
    return hashlib.sha256(f"{seed}:{subset_id}:{key[0]}:{key[1]}".encode("utf-8")).hexdigest()


def _stratified(
    subset_id: str,
    pool: Sequence[AnnotatedCommit],
    stratum: Callable[[AnnotatedCommit], str | None],
    quotas: Mapping[str, int],
    seed: int,
) -> list[Key]:
    groups: dict[str, list[Key]] = defaultdict(list)
    for c in pool:
        s = stratum(c)
        if s is not None and s in quotas:
            groups[s].append(c.key)
    short = {s: (len(groups[s]), n) for s, n in quotas.items() if len(groups[s]) < n}
    if short:
        raise InsufficientPopulation(subset_id, short)
    out: list[Key] = []
    for s, n in quotas.items():
        if n < 0:
            raise ValueError(f"negative quota for {s}")
        out += sorted(groups[s], key=lambda k: rank(seed, subset_id, k))[:n]
    return out


def sample_ten_eval(
    dataset: Sequence[AnnotatedCommit],
    per_class: int = DEFAULT_PER_CLASS,
    seed: int = 0,
    verified_only: bool = False,
) -> DatasetSubset:
    """``per_class`` commits for each of the ten types."""
    if per_class < 0:
        raise ValueError("per_class must be nonnegative")

    def label(c: AnnotatedCommit) -> str | None:
        if c.ccs is None or (verified_only and not c.verified):
            return None
        return c.ccs.type.value

    quotas = {t.value: per_class for t in COMMIT_TYPES}
    keys = _stratified("D_ten", dataset, label, quotas, seed)
    params = {"per_class": str(per_class), "verified_only": str(verified_only).lower()}
    return DatasetSubset("D_ten", keys, seed, params)


def sample_cmg_eval(
    dataset: Sequence[AnnotatedCommit],
    quotas: Mapping[str, int] | None = None,
    seed: int = 0,
) -> DatasetSubset:
    """Per-language quotas over commits whose message carries both what and why."""
    quotas = dict(DEFAULT_CMG_QUOTAS if quotas is None else quotas)

    def group(c: AnnotatedCommit) -> str | None:
        if c.what_why is None or c.what_why.state != "11" or c.language is None:
            return None
        return quota_group(c.language)

    keys = _stratified("D_cmg", dataset, group, quotas, seed)
    params = {"quotas": json.dumps(quotas, sort_keys=True), "eligibility": "what_why.state == 11"}
    return DatasetSubset("D_cmg", keys, seed, params)


def sample_from(
    subset_id: str,
    parent: Sequence[AnnotatedCommit],
    size: int | None = None,
    seed: int = 0,
) -> DatasetSubset:
    """Uniform draw for D_human, D_ast_cmg and D_ast_ten out of their parent rows."""
    if subset_id not in DEFAULT_SIZES:
        raise ValueError(f"{subset_id} is not drawn by sample_from")
    n = DEFAULT_SIZES[subset_id] if size is None else size
    keys = _stratified(subset_id, parent, lambda c: "all", {"all": n}, seed)
    return DatasetSubset(subset_id, keys, seed, {"size": str(n)})


def full_subset(dataset: Sequence[AnnotatedCommit], seed: int = 0) -> DatasetSubset:
    return DatasetSubset("D_all", [c.key for c in dataset], seed, {})
