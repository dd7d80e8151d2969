"""Dataset statistics and minimal SVG bar charts."""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from html import escape
from pathlib import Path
from typing import Sequence

from ..ccs import COMMIT_TYPES
from ..filters import METRICS, commit_metrics, quantile
from .records import AnnotatedCommit

STATES = ("00", "01", "10", "11")
QUANTILES = (0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1)


def _num(x: Fraction) -> int | float:
    return int(x) if x.denominator == 1 else float(x)


def dataset_stats(dataset: Sequence[AnnotatedCommit]) -> dict:
    """Type histogram, what/why state shares and the five metric distributions.

    Quantiles use the same linear-interpolation rule as the outlier filter.
    Shares are exact fractions rendered as floats.
    """
    n = len(dataset)
    types = Counter(c.ccs.type.value for c in dataset if c.ccs is not None)
    states = Counter(c.what_why.state for c in dataset if c.what_why is not None)
    annotated = sum(states.values())
    langs = Counter(c.language or "mixed/none" for c in dataset)
    dists = {}
    values = [commit_metrics(c.raw) for c in dataset]
    for name in METRICS:
        xs = sorted(Fraction(v[name]) for v in values)
        if xs:
            qs = {f"q{int(q * 100)}": _num(quantile(xs, Fraction(q))) for q in QUANTILES}
            qs["mean"] = _num(sum(xs) / len(xs))
        else:
            qs = {}
        dists[name] = qs
    return {
        "commits": n,
        "type_histogram": {t.value: types.get(t.value, 0) for t in COMMIT_TYPES},
        "unparsed": n - sum(types.values()),
        "what_why_counts": {s: states.get(s, 0) for s in STATES},
        "what_why_shares": {s: (states.get(s, 0) / annotated if annotated else 0.0) for s in STATES},
        "languages": dict(sorted(langs.items())),
        "distributions": dists,
    }


def svg_bar_chart(title: str, counts: dict[str, int | float], width: int = 640, bar_h: int = 22) -> str:
    """Horizontal bar chart as a standalone SVG string."""
    labels = list(counts)
    top = max([float(v) for v in counts.values()] + [1.0])
    pad_l, pad_t = 110, 34
    height = pad_t + bar_h * len(labels) + 12
    span = width - pad_l - 70
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="12">',
        f'<text x="{width / 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]
    for i, lab in enumerate(labels):
        v = float(counts[lab])
        y = pad_t + i * bar_h
        w = span * v / top
        out.append(f'<text x="{pad_l - 6}" y="{y + bar_h * 0.65:.1f}" text-anchor="end">{escape(str(lab))}</text>')
        out.append(f'<rect x="{pad_l}" y="{y + 3}" width="{w:.1f}" height="{bar_h - 6}" fill="#4c72b0"/>')
        shown = f"{v:.3f}" if isinstance(counts[lab], float) else str(counts[lab])
        out.append(f'<text x="{pad_l + w + 4:.1f}" y="{y + bar_h * 0.65:.1f}">{shown}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_stats_svgs(stats: dict, out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    charts = {
        "type_histogram.svg": ("Commit types", stats["type_histogram"]),
        "what_why_states.svg": ("What/why states", stats["what_why_counts"]),
        "languages.svg": ("Languages", stats["languages"]),
    }
    paths = []
    for name, (title, counts) in charts.items():
        p = out_dir / name
        p.write_text(svg_bar_chart(title, counts), "utf-8")
        paths.append(p)
    return paths
