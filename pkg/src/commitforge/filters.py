"""Commit filter cascade and IQR outlier removal.

Stages run in a fixed order and short-circuit on the first failure::

    ccs_format -> single_language -> bot -> multi_type -> outlier

The first four are per-commit predicates. ``outlier`` needs the whole
surviving population: fences are computed once over it and applied in a
single pass (``mode="union"``) or metric by metric with re-fencing after each
metric (``mode="sequential"``).

Quartiles use linear interpolation between order statistics: for sorted
values ``x[0..n-1]`` and probability ``p`` the position is ``h = (n-1)·p`` and
``Q(p) = x[⌊h⌋] + (h-⌊h⌋)·(x[⌊h⌋+1] - x[⌊h⌋])``. This is numpy's default
``linear`` method (Hyndman-Fan type 7). Arithmetic is exact (``Fraction``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .ccs import NonCompliant, detect_multi_type, parse_message
from .languages import OTHER, SUPPORTED
from .tokens import count_tokens

STAGES = ("ccs_format", "single_language", "bot", "multi_type", "outlier")
METRICS = ("diff_length_chars", "description_chars", "diff_tokens", "description_tokens", "files_modified")
BOT_MARKERS = ("bot", "robert", "b0t")


@dataclass(frozen=True)
class StageResult:
    stage: str
    passed: bool
    reason: str


@dataclass
class FilterProvenance:
    stage_results: list[StageResult] = field(default_factory=list)

    @property
    def final(self) -> str:
        if len(self.stage_results) == len(STAGES) and all(r.passed for r in self.stage_results):
            return "kept"
        if self.stage_results and not self.stage_results[-1].passed:
            return "dropped"
        return "pending"

    @property
    def dropped_at(self) -> str | None:
        if self.stage_results and not self.stage_results[-1].passed:
            return self.stage_results[-1].stage
        return None

    def record(self, stage: str, passed: bool, reason: str) -> bool:
        assert self.final == "pending", "stage recorded after a terminal result"
        assert stage == STAGES[len(self.stage_results)], f"out-of-order stage {stage}"
        self.stage_results.append(StageResult(stage, passed, reason))
        return passed

    def to_dict(self) -> dict:
        return {
            "stage_results": [[r.stage, r.passed, r.reason] for r in self.stage_results],
            "final": self.final,
        }

    @classmethod
    def from_dict(cls, d: dict) -> FilterProvenance:
        return cls([StageResult(s, bool(p), r) for s, p, r in d.get("stage_results", [])])


@dataclass(frozen=True)
class Check:
    passed: bool
    reason: str

    def __bool__(self) -> bool:
        return self.passed


# --- per-commit stages --------------------------------------------------------

def filter_ccs_format(commit) -> Check:
    try:
        msg = parse_message(commit.message)
    except NonCompliant as exc:
        return Check(False, exc.reason)
    return Check(True, msg.type.value)


def filter_single_language(commit, ignore_nonsource: bool = False) -> Check:
    langs = {m.language for m in commit.modifications}
    if OTHER in langs and not ignore_nonsource:
        others = sorted(m.path for m in commit.modifications if m.language == OTHER)
        return Check(False, "non-source files: " + ", ".join(others[:5]))
    langs.discard(OTHER)
    if not langs:
        return Check(False, "no supported-language file")
    if len(langs) > 1:
        return Check(False, "multiple languages: " + ", ".join(sorted(langs)))
    (lang,) = langs
    assert lang in SUPPORTED
    return Check(True, lang)


def load_botlist(path: str | Path) -> set[str]:
    """Newline-delimited names; blank lines and ``#`` comments ignored."""
    names = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            names.add(line.lower())
    return names


def filter_bots(commit, botlist: Iterable[str] = (), robert_rule: bool = True) -> Check:
    markers = BOT_MARKERS if robert_rule else tuple(m for m in BOT_MARKERS if m != "robert")
    known = {b.lower() for b in botlist}
    for label, value in (("author", commit.author_name), ("email", commit.author_email)):
        low = (value or "").lower()
        for m in markers:
            if m in low:
                return Check(False, f"{label} contains {m!r}")
        if low in known:
            return Check(False, f"{label} in known-bot list")
    return Check(True, "human")


def filter_multi_type(commit) -> Check:
    verdict = detect_multi_type(commit.message)
    if verdict.status == "multi_type":
        return Check(False, "types: " + ", ".join(t.value for t in verdict.matched_types))
    return Check(True, "single type")


# --- IQR fences ------------------------------------------------------------------

@dataclass(frozen=True)
class DistributionStats:
    metric_name: str
    q1: Fraction
    q3: Fraction
    multiplier: Fraction

    @property
    def iqr(self) -> Fraction:
        return self.q3 - self.q1

    @property
    def lower_fence(self) -> Fraction:
        return self.q1 - self.multiplier * self.iqr

    @property
    def upper_fence(self) -> Fraction:
        return self.q3 + self.multiplier * self.iqr

    def is_outlier(self, value) -> bool:
        v = Fraction(value)
        return v < self.lower_fence or v > self.upper_fence

    def to_dict(self) -> dict:
        return {
            "metric_name": self.metric_name,
            "q1": float(self.q1),
            "q3": float(self.q3),
            "iqr": float(self.iqr),
            "lower_fence": float(self.lower_fence),
            "upper_fence": float(self.upper_fence),
            "multiplier": float(self.multiplier),
        }


def quantile(sorted_values: Sequence[Fraction], p: Fraction) -> Fraction:
    n = len(sorted_values)
    h = (n - 1) * Fraction(p)
    lo = math.floor(h)
    if lo + 1 >= n:
        return sorted_values[n - 1]
    return sorted_values[lo] + (h - lo) * (sorted_values[lo + 1] - sorted_values[lo])


def compute_iqr_fences(values: Iterable, multiplier=Fraction(3, 2), metric_name: str = "") -> DistributionStats:
    xs = sorted(Fraction(v) for v in values)
    if not xs:
        raise ValueError("empty-input: IQR fences need at least one value")
    return DistributionStats(
        metric_name=metric_name,
        q1=quantile(xs, Fraction(1, 4)),
        q3=quantile(xs, Fraction(3, 4)),
        multiplier=Fraction(multiplier),
    )


def commit_metrics(commit) -> dict[str, int]:
    """The five distribution values for one commit."""
    diff = "".join(m.unified_diff for m in commit.modifications)
    try:
        description = parse_message(commit.message).description
    except NonCompliant:
        description = commit.message.split("\n", 1)[0]
    return {
        "diff_length_chars": len(diff),
        "description_chars": len(description),
        "diff_tokens": count_tokens(diff),
        "description_tokens": count_tokens(description),
        "files_modified": len(commit.modifications),
    }


def remove_outliers(
    commits: Sequence,
    multiplier=Fraction(3, 2),
    mode: str = "union",
    metrics: Callable[[object], dict[str, int]] = commit_metrics,
) -> tuple[list, list, dict[str, DistributionStats], dict[int, str]]:
    """Split ``commits`` into (kept, dropped).

    Also returns the fences per metric (for ``sequential`` mode, the fences of
    the pass that used them) and a map ``index -> reason`` for dropped items.
    """
    if mode not in ("union", "sequential"):
        raise ValueError(f"unknown outlier mode {mode!r}")
    values = [metrics(c) for c in commits]
    alive = list(range(len(commits)))
    reasons: dict[int, str] = {}
    fences: dict[str, DistributionStats] = {}
    if commits and mode == "union":
        for name in METRICS:
            fences[name] = compute_iqr_fences((values[i][name] for i in alive), multiplier, name)
        for i in alive:
            for name in METRICS:
                if fences[name].is_outlier(values[i][name]):
                    reasons[i] = _outlier_reason(name, values[i][name], fences[name])
                    break
    elif commits:
        for name in METRICS:
            if not alive:
                break
            fences[name] = st = compute_iqr_fences((values[i][name] for i in alive), multiplier, name)
            survivors = []
            for i in alive:
                if st.is_outlier(values[i][name]):
                    reasons[i] = _outlier_reason(name, values[i][name], st)
                else:
                    survivors.append(i)
            alive = survivors
    kept = [c for i, c in enumerate(commits) if i not in reasons]
    dropped = [c for i, c in enumerate(commits) if i in reasons]
    return kept, dropped, fences, reasons


def _outlier_reason(name: str, value, st: DistributionStats) -> str:
    side = "below lower" if Fraction(value) < st.lower_fence else "above upper"
    bound = st.lower_fence if side.startswith("below") else st.upper_fence
    return f"{name}={value} {side} fence {float(bound):g}"


# --- cascade ------------------------------------------------------------------

@dataclass
class FilterConfig:
    botlist: frozenset[str] = frozenset()
    ignore_nonsource: bool = False
    robert_rule: bool = True
    multiplier: Fraction = Fraction(3, 2)
    outlier_mode: str = "union"


@dataclass
class FilterOutcome:
    provenance: list[FilterProvenance]
    stage_counts: dict[str, dict[str, int]]
    fences: dict[str, DistributionStats]

    def kept_indices(self) -> list[int]:
        return [i for i, p in enumerate(self.provenance) if p.final == "kept"]


def run_filters(commits: Sequence, cfg: FilterConfig | None = None) -> FilterOutcome:
    cfg = cfg or FilterConfig()
    provs = [FilterProvenance() for _ in commits]
    checks: list[tuple[str, Callable]] = [
        ("ccs_format", filter_ccs_format),
        ("single_language", lambda c: filter_single_language(c, cfg.ignore_nonsource)),
        ("bot", lambda c: filter_bots(c, cfg.botlist, cfg.robert_rule)),
        ("multi_type", filter_multi_type),
    ]
    for c, prov in zip(commits, provs):
        for stage, fn in checks:
            res = fn(c)
            if not prov.record(stage, res.passed, res.reason):
                break
    survivors = [i for i, p in enumerate(provs) if p.final == "pending"]
    _, _, fences, reasons = remove_outliers(
        [commits[i] for i in survivors], cfg.multiplier, cfg.outlier_mode
    )
    for j, i in enumerate(survivors):
        if j in reasons:
            provs[i].record("outlier", False, reasons[j])
        else:
            provs[i].record("outlier", True, "within fences")
    counts = {s: {"in": 0, "removed": 0} for s in STAGES}
    for p in provs:
        for r in p.stage_results:
            counts[r.stage]["in"] += 1
            counts[r.stage]["removed"] += 0 if r.passed else 1
    return FilterOutcome(provs, counts, fences)
