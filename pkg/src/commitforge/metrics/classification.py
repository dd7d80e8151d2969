"""Ten-category classification scores."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..ccs import COMMIT_TYPES, CommitType


@dataclass
class ConfusionMatrix:
    labels: tuple[str, ...]
    counts: list[list[int]]  # rows = gold, columns = predicted

    @property
    def total(self) -> int:
        return sum(map(sum, self.counts))

    def row_sums(self) -> list[int]:
        return [sum(r) for r in self.counts]

    def col_sums(self) -> list[int]:
        return [sum(r[j] for r in self.counts) for j in range(len(self.labels))]

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "counts": [list(r) for r in self.counts]}


@dataclass
class ClassScores:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass
class ClassificationReport:
    per_class: dict[str, ClassScores]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    accuracy: float
    averaged_over: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "per_class": {k: vars(v) for k, v in self.per_class.items()},
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "accuracy": self.accuracy,
            "averaged_over": self.averaged_over,
        }


def _label(x) -> str:
    return x.value if isinstance(x, CommitType) else str(x).lower()


def classification_report(
    gold: Sequence,
    pred: Sequence,
    labels: Sequence[str] = tuple(t.value for t in COMMIT_TYPES),
    absent_as_zero: bool = False,
) -> tuple[ConfusionMatrix, ClassificationReport]:
    """Confusion matrix plus per-class and macro precision/recall/F1.

    A class with no predictions gets precision 0; a class with no gold items
    gets recall 0. Macro averages run over the classes that occur in gold or
    pred; classes absent from both are listed with zeros but not averaged.
    With ``absent_as_zero`` the macro mean runs over every label instead, so
    absent classes pull it down.
    """
    if len(gold) != len(pred):
        raise ValueError(f"length-mismatch: {len(gold)} gold vs {len(pred)} predicted")
    if not gold:
        raise ValueError("classification_report needs at least one item")
    labels = tuple(labels)
    index = {lab: i for i, lab in enumerate(labels)}
    counts = [[0] * len(labels) for _ in labels]
    for g, p in zip(gold, pred):
        gl, pl = _label(g), _label(p)
        if gl not in index or pl not in index:
            raise ValueError(f"label outside the taxonomy: {gl!r} / {pl!r}")
        counts[index[gl]][index[pl]] += 1
    cm = ConfusionMatrix(labels, counts)
    rows, cols = cm.row_sums(), cm.col_sums()
    per_class = {}
    present = []
    for i, lab in enumerate(labels):
        tp = counts[i][i]
        prec = tp / cols[i] if cols[i] else 0.0
        rec = tp / rows[i] if rows[i] else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        per_class[lab] = ClassScores(prec, rec, f1, rows[i])
        if rows[i] or cols[i] or absent_as_zero:
            present.append(lab)
    n = len(present)
    report = ClassificationReport(
        per_class=per_class,
        macro_precision=sum(per_class[c].precision for c in present) / n,
        macro_recall=sum(per_class[c].recall for c in present) / n,
        macro_f1=sum(per_class[c].f1 for c in present) / n,
        accuracy=sum(counts[i][i] for i in range(len(labels))) / cm.total,
        averaged_over=present,
    )
    return cm, report
