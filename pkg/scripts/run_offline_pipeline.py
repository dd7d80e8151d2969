"""Run the whole offline pipeline over a freshly built, labelled git repository.

Every stage goes through the real CLI entry point. No network access is needed:
annotation and CMG judging use the rule-based judge.

    python scripts/run_offline_pipeline.py [--workdir DIR]
"""
from __future__ import annotations

import argparse
import json
import sys
import tempfile
from pathlib import Path

from commitforge.cli import main, manifest_path
from commitforge.datastore import read_dataset
from commitforge.filters import STAGES
from commitforge.synthetic import build_filter_repo


def step(*argv: object) -> None:
    args = [str(a) for a in argv]
    print("$ commitforge", " ".join(args), flush=True)
    code = main(args)
    if code:
        sys.exit(f"step failed with exit code {code}")


def run(work: Path) -> None:
    repo = build_filter_repo(work / "repo")
    d = work / "out"
    d.mkdir(exist_ok=True)
    step("mine", repo.path, "--since", repo.since, "-o", d / "mined.jsonl")
    step("filter", "-i", d / "mined.jsonl", "-o", d / "filtered.jsonl", "--dropped", d / "dropped.jsonl")
    step("ast", "-i", d / "filtered.jsonl", "-o", d / "ast.jsonl", "--jobs", 4)
    step("annotate", "-i", d / "ast.jsonl", "-o", d / "annotated.jsonl")
    step("stats", "-i", d / "annotated.jsonl", "-o", d / "stats.json", "--svg-dir", d / "svg")
    step("subset", "-i", d / "annotated.jsonl", "-o", d / "ten.jsonl", "--id", "D_ten", "--seed", 42,
         "--per-class", 5)

    # identity predictions and copy-the-reference candidates give known scores
    rows = read_dataset(d / "ten.jsonl")
    with open(d / "pred.jsonl", "w", encoding="utf-8") as f:
        for c in rows:
            f.write(json.dumps({"repo_id": c.raw.repo_id, "hash": c.raw.hash, "type": c.ccs.type.value}) + "\n")
    with open(d / "cands.jsonl", "w", encoding="utf-8") as f:
        for c in rows:
            f.write(json.dumps({"repo_id": c.raw.repo_id, "hash": c.raw.hash, "message": c.raw.message,
                                "system": "reference"}) + "\n")
    step("eval-classify", "--gold", d / "ten.jsonl", "--pred", d / "pred.jsonl", "-o", d / "classify.json")
    step("eval-cmg", "-i", d / "ten.jsonl", "--candidates", d / "cands.jsonl", "-o", d / "cmg.json")

    counts = json.loads(manifest_path(d / "filtered.jsonl").read_text())["stage_counts"]
    print("\nfilter stages:")
    for stage in STAGES:
        c = counts["stages"][stage]
        print(f"  {stage:<16} in {c['in']:>4}  removed {c['removed']:>3}")
    print(f"\noutputs in {d}")


def cli() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--workdir", type=Path, help="keep outputs here instead of a temporary directory")
    a = ap.parse_args()
    if a.workdir:
        a.workdir.mkdir(parents=True, exist_ok=True)
        run(a.workdir)
    else:
        with tempfile.TemporaryDirectory() as tmp:
            run(Path(tmp))


if __name__ == "__main__":
    cli()
