"""``commitforge`` command line.

Stages talk only through files: ``mine`` writes a dataset JSONL, every later
stage reads one and writes another. Each run that writes an output also writes
``<output>.manifest.json`` next to it.

Exit codes: 0 success, 1 validation error (bad flags, bad input data,
impossible sampling request), 2 environment error (missing repository, file,
credential or unreachable endpoint).

Configuration: ``--config FILE`` names a TOML file whose tables are keyed by
subcommand (``[filter]``, ``[eval-cmg]`` ...). Keys are flag names with
underscores (``outlier_mode = "sequential"``). Flags given on the command line
win over the file.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from . import __version__
from .ast_change import manifest_digest, version_mismatches
from .datastore import (
    DEFAULT_CMG_QUOTAS,
    DEFAULT_PER_CLASS,
    DEFAULT_SIZES,
    SUBSET_IDS,
    AnnotatedCommit,
    dataset_stats,
    read_dataset,
    read_subset,
    sample_cmg_eval,
    sample_from,
    sample_ten_eval,
    write_dataset,
    write_stats_svgs,
    write_subset,
)
from .filters import FilterConfig, load_botlist
from .forge import FixtureForge, ForgeUnreachable, HttpForge, RateLimited, RepoCriteria, discover_repos
from .judge import BINARY_METRICS, EndpointUnreachable, Judge, JudgeConfig, JudgeContext, MissingCredential, batch_evaluate
from .judge.core import ItemFailure
from .metrics import bleu, classification_report, cohen_kappa, meteor, pairwise_kappa, rouge_l, sign_test_exact
from .miner import RepositoryNotFound
from . import pipeline

log = logging.getLogger("commitforge")


class UsageError(ValueError):
    pass


class EnvironmentProblem(RuntimeError):
    pass


ENV_ERRORS = (
    EnvironmentProblem,
    RepositoryNotFound,
    FileNotFoundError,
    PermissionError,
    MissingCredential,
    EndpointUnreachable,
    ForgeUnreachable,
    RateLimited,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2; flag mistakes are validation errors
        raise UsageError(f"{self.prog}: {message}")


# --- manifest -----------------------------------------------------------------

def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


def _jsonable(v: Any) -> Any:
    if isinstance(v, Path):
        return str(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (date, datetime)):
        return v.isoformat()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (set, frozenset)):
        return sorted(_jsonable(x) for x in v)
    return v


@dataclass
class RunManifest:
    subcommand: str
    config: dict
    inputs: list[str]
    outputs: list[str]
    started: str
    finished: str = ""
    stage_counts: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "config": _jsonable(self.config),
            "inputs": self.inputs,
            "outputs": self.outputs,
            "tool_version": __version__,
            "grammar_manifest_digest": manifest_digest(),
            "started": self.started,
            "finished": self.finished,
            "stage_counts": _jsonable(self.stage_counts),
            **_jsonable(self.extra),
        }


def manifest_path(output: str | Path) -> Path:
    return Path(str(output) + ".manifest.json")


def write_manifest(output: str | Path, m: RunManifest) -> Path:
    m.finished = _now()
    p = manifest_path(output)
    p.write_text(json.dumps(m.to_dict(), indent=1, sort_keys=True) + "\n", "utf-8")
    return p


def _dump_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(json.dumps(_jsonable(obj), indent=1, sort_keys=True) + "\n", "utf-8")


def _config_of(args: argparse.Namespace) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func", "config")}


def _read(path: str) -> list[AnnotatedCommit]:
    if not Path(path).exists():
        raise FileNotFoundError(f"input file not found: {path}")
    return read_dataset(path)


def _parse_date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise UsageError(f"not an ISO date (YYYY-MM-DD): {text!r}") from None


# --- subcommands --------------------------------------------------------------

def cmd_discover(args) -> int:
    criteria = RepoCriteria(
        min_forks=args.min_forks,
        max_avg_daily_commits=args.max_avg_daily_commits,
        min_age_years=args.min_age_years,
        max_age_years=args.max_age_years,
        earliest_commit_date=_parse_date(args.earliest),
        license_allowlist=frozenset(args.license),
    )
    if args.fixture:
        if not Path(args.fixture).exists():
            raise FileNotFoundError(f"fixture not found: {args.fixture}")
        forge = FixtureForge.load(args.fixture)
    else:
        forge = HttpForge(base_url=args.api_url, max_candidates=args.max_candidates)
    now = datetime.combine(_parse_date(args.now), datetime.min.time(), timezone.utc) if args.now else None
    m = RunManifest("discover", _config_of(args), [args.fixture or args.api_url], [args.output], _now())
    repos = discover_repos(criteria, forge, now)
    _dump_json(args.output, {"repos": [r.to_dict() for r in repos]})
    m.stage_counts = {"selected": len(repos)}
    write_manifest(args.output, m)
    print(f"{len(repos)} repositories selected -> {args.output}")
    return 0


def cmd_mine(args) -> int:
    m = RunManifest("mine", _config_of(args), list(args.repos), [args.output], _now())
    since = _parse_date(args.since) if args.since else None
    res = pipeline.mine_repos(args.repos, since, args.jobs, args.content_cap, args.partial)
    write_dataset(args.output, res.commits)
    m.stage_counts = {"mined": len(res.commits), "per_repo": res.per_repo, "skipped": len(res.warnings)}
    m.extra = {"warnings": [list(w) for w in res.warnings]}
    write_manifest(args.output, m)
    print(f"mined {len(res.commits)} commits from {len(args.repos)} repositories -> {args.output}")
    return 0


def cmd_filter(args) -> int:
    commits = _read(args.input)
    botlist = frozenset(load_botlist(args.botlist)) if args.botlist else frozenset()
    cfg = FilterConfig(
        botlist=botlist,
        ignore_nonsource=args.ignore_nonsource,
        robert_rule=not args.no_robert_rule,
        multiplier=Fraction(str(args.multiplier)),
        outlier_mode=args.outlier_mode,
    )
    outputs = [args.output] + ([args.dropped] if args.dropped else [])
    m = RunManifest("filter", _config_of(args), [args.input], outputs, _now())
    kept, dropped, outcome = pipeline.filter_commits(commits, cfg)
    write_dataset(args.output, kept)
    if args.dropped:
        write_dataset(args.dropped, dropped)
    m.stage_counts = {
        "input": len(commits),
        "kept": len(kept),
        "removed": len(dropped),
        "stages": outcome.stage_counts,
    }
    m.extra = {"fences": {k: v.to_dict() for k, v in outcome.fences.items()}}
    write_manifest(args.output, m)
    print(f"kept {len(kept)} of {len(commits)} commits")
    for stage, c in outcome.stage_counts.items():
        print(f"  {stage:<16} in={c['in']:<6} removed={c['removed']}")
    return 0


def cmd_ast(args) -> int:
    bad = version_mismatches()
    if bad:
        raise EnvironmentProblem("installed grammars differ from the pinned manifest: " + "; ".join(bad))
    commits = _read(args.input)
    m = RunManifest("ast", _config_of(args), [args.input], [args.output], _now())
    out = pipeline.ast_stage(commits, args.jobs)
    write_dataset(args.output, out)
    m.stage_counts = {
        "commits": len(out),
        "structural_changes": sum(len(c.ast_changes) for c in out),
        "hunks": sum(len(c.hunk_contexts) for c in out),
        "commits_with_changes": sum(bool(c.ast_changes) for c in out),
    }
    write_manifest(args.output, m)
    print(f"{m.stage_counts['structural_changes']} structural changes in {len(out)} commits -> {args.output}")
    return 0


def _judge_config(args) -> JudgeConfig:
    return JudgeConfig(
        backend=args.backend,
        endpoint_url=args.endpoint_url,
        model_name=args.model,
        temperature=args.temperature,
        max_retries=args.max_retries,
        requests_per_minute=args.rpm,
        cache_dir=args.cache_dir,
        message_only=getattr(args, "message_only", False),
    )


def cmd_annotate(args) -> int:
    commits = _read(args.input)
    cfg = _judge_config(args)
    judge = Judge(cfg)
    m = RunManifest("annotate", _config_of(args), [args.input], [args.output], _now())
    try:
        res = pipeline.annotate_stage(commits, judge, min(args.jobs, cfg.requests_per_minute))
    finally:
        judge.close()
    write_dataset(args.output, res.commits)
    states: dict[str, int] = {}
    for c in res.commits:
        if c.what_why:
            states[c.what_why.state] = states.get(c.what_why.state, 0) + 1
    m.stage_counts = {"commits": len(commits), "unannotated": len(res.failures), "states": dict(sorted(states.items()))}
    m.extra = {"judge_id": cfg.judge_id, "failures": [list(f) for f in res.failures]}
    write_manifest(args.output, m)
    print(f"annotated {len(commits) - len(res.failures)} of {len(commits)} commits ({cfg.judge_id})")
    return 0


def cmd_stats(args) -> int:
    commits = _read(args.input)
    m = RunManifest("stats", _config_of(args), [args.input], [args.output], _now())
    st = dataset_stats(commits)
    _dump_json(args.output, st)
    if args.svg_dir:
        m.outputs += [str(p) for p in write_stats_svgs(st, args.svg_dir)]
    m.stage_counts = {"commits": st["commits"]}
    write_manifest(args.output, m)
    print(json.dumps({"commits": st["commits"], "type_histogram": st["type_histogram"]}, sort_keys=True))
    return 0


def _quotas(items: Sequence[str] | None) -> dict[str, int] | None:
    if not items:
        return None
    out = {}
    for it in items:
        lang, sep, n = it.rpartition("=")
        if not sep or not n.isdigit():
            raise UsageError(f"--quota expects LANGUAGE=COUNT, got {it!r}")
        out[lang] = int(n)
    return out


def subset_path(output: str | Path) -> Path:
    p = Path(output)
    return p.with_name(p.name.removesuffix(".jsonl") + ".subset.json")


def cmd_subset(args) -> int:
    commits = _read(args.input)
    if args.id == "D_ten":
        sub = sample_ten_eval(commits, args.per_class, args.seed, args.verified_only)
    elif args.id == "D_cmg":
        sub = sample_cmg_eval(commits, _quotas(args.quota), args.seed)
    elif args.id in DEFAULT_SIZES:
        sub = sample_from(args.id, commits, args.size, args.seed)
    else:
        raise UsageError(f"{args.id} is the full dataset; nothing to sample")
    parent_id = None
    parent_desc = subset_path(args.input)
    if parent_desc.exists():
        parent_id = read_subset(parent_desc).id
    elif sub.parent == "D_all":
        parent_id = "D_all"
    desc = subset_path(args.output)
    m = RunManifest("subset", _config_of(args), [args.input], [args.output, str(desc)], _now())
    write_subset(desc, sub, (c.key for c in commits), parent_id)
    write_dataset(args.output, sub.select(commits))
    m.stage_counts = {"pool": len(commits), "members": len(sub)}
    m.extra = {"subset_id": sub.id, "parent": sub.parent}
    write_manifest(args.output, m)
    print(f"{sub.id}: {len(sub)} members (seed {args.seed}) -> {args.output}")
    return 0


def _read_jsonl_objects(path: str) -> list[dict]:
    if not Path(path).exists():
        raise FileNotFoundError(f"input file not found: {path}")
    out = []
    for no, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise UsageError(f"{path} line {no}: malformed JSON ({e.msg})") from None
        if "schema_version" in obj and "record" in obj:
            continue  # dataset header
        out.append(obj)
    return out


def _predicted_type(obj: dict) -> str:
    if obj.get("ccs"):
        return obj["ccs"]["type"]
    for k in ("type", "pred", "label"):
        if k in obj:
            return str(obj[k]).lower()
    raise UsageError(f"prediction for {obj.get('repo_id')}/{obj.get('hash')} has no type field")


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_eval_classify(args) -> int:
    gold_rows = _read(args.gold)
    preds = {(o["repo_id"], o["hash"]): _predicted_type(o) for o in _read_jsonl_objects(args.pred)}
    gold, pred = [], []
    for c in gold_rows:
        if c.ccs is None:
            raise UsageError(f"gold row {c.key} has no parsed type")
        if c.key not in preds:
            raise UsageError(f"no prediction for {c.key[0]}/{c.key[1]}")
        gold.append(c.ccs.type.value)
        pred.append(preds[c.key])
    cm, rep = classification_report(gold, pred, absent_as_zero=args.absent_as_zero)
    report = {"confusion_matrix": cm.to_dict(), **rep.to_dict(), "n": len(gold)}
    outputs = [p for p in (args.output, args.csv) if p]
    if args.output:
        m = RunManifest("eval-classify", _config_of(args), [args.gold, args.pred], outputs, _now())
        _dump_json(args.output, report)
        write_manifest(args.output, m)
    if args.csv:
        rows = [[t, f"{s.precision:.4f}", f"{s.recall:.4f}", f"{s.f1:.4f}", s.support] for t, s in rep.per_class.items()]
        rows.append(["macro", f"{rep.macro_precision:.4f}", f"{rep.macro_recall:.4f}", f"{rep.macro_f1:.4f}", len(gold)])
        Path(args.csv).write_text(_csv_text(["class", "precision", "recall", "f1", "support"], rows), "utf-8")
    print(f"accuracy {rep.accuracy:.3f}  macro-P {rep.macro_precision:.3f}  macro-R {rep.macro_recall:.3f}  macro-F1 {rep.macro_f1:.3f}")
    return 0


def cmd_eval_cmg(args) -> int:
    rows = {c.key: c for c in _read(args.input)}
    cands = _read_jsonl_objects(args.candidates)
    by_system: dict[str, list[tuple[AnnotatedCommit, str]]] = {}
    for o in cands:
        key = (o["repo_id"], o["hash"])
        if key not in rows:
            raise UsageError(f"candidate for unknown commit {key[0]}/{key[1]}")
        if not str(o.get("message", "")).strip():
            raise UsageError(f"empty candidate message for {key[0]}/{key[1]}")
        by_system.setdefault(str(o.get("system", "candidate")), []).append((rows[key], o["message"]))
    cfg = _judge_config(args)
    judge = Judge(cfg)
    scale = 100.0 if args.scale100 else 1.0
    systems = {}
    judge_items = []
    try:
        for system in sorted(by_system):
            pairs = by_system[system]
            items = []
            for commit, msg in pairs:
                ctx = JudgeContext.from_commit(commit, None if args.ast else ())
                items.append((ctx, msg))
            verdicts, bm = batch_evaluate(items, cfg, judge=judge, jobs=args.jobs)
            judge_items.append({"system": system, **bm.to_dict()})
            ok = [v for v in verdicts if not isinstance(v, ItemFailure)]
            n = len(pairs)
            systems[system] = {
                "n": n,
                "bleu": sum(bleu(msg, [c.raw.message]) for c, msg in pairs) / n,
                "rouge_l": scale * sum(rouge_l(msg, c.raw.message) for c, msg in pairs) / n,
                "meteor": scale * sum(meteor(msg, c.raw.message) for c, msg in pairs) / n,
                "binary": {m: (sum(getattr(v, m) for v in ok) / len(ok) if ok else None) for m in BINARY_METRICS},
                "judged": len(ok),
                "judge_failures": n - len(ok),
            }
    finally:
        judge.close()
    report = {"judge_id": cfg.judge_id, "systems": systems, "scale_rouge_meteor": scale}
    outputs = [p for p in (args.output, args.csv) if p]
    if args.output:
        m = RunManifest("eval-cmg", _config_of(args), [args.input, args.candidates], outputs, _now())
        _dump_json(args.output, report)
        m.extra = {"judge_batches": judge_items}
        write_manifest(args.output, m)
    if args.csv:
        Path(args.csv).write_text(_cmg_csv(systems), "utf-8")
    print(_cmg_csv(systems), end="")
    return 0


def _cmg_csv(systems: dict) -> str:
    header = ["system", "BLEU", "ROUGE-L", "METEOR"] + [m.replace("_", "-").title() for m in BINARY_METRICS]
    rows = []
    for name, s in systems.items():
        binary = [f"{s['binary'][m]:.3f}" if s["binary"][m] is not None else "" for m in BINARY_METRICS]
        rows.append([name, f"{s['bleu']:.2f}", f"{s['rouge_l']:.4f}", f"{s['meteor']:.4f}", *binary])
    return _csv_text(header, rows)


def _read_labels(path: str) -> list[str]:
    if not Path(path).exists():
        raise FileNotFoundError(f"label file not found: {path}")
    text = Path(path).read_text("utf-8")
    if text.lstrip().startswith("["):
        return [str(x) for x in json.loads(text)]
    return [ln.strip() for ln in text.splitlines() if ln.strip()]


def cmd_agreement(args) -> int:
    raters = [_read_labels(p) for p in args.rater]
    if len(raters) < 2:
        raise UsageError("agreement needs at least two --rater files")
    rep = cohen_kappa(*raters) if len(raters) == 2 else pairwise_kappa(raters)
    if args.output:
        m = RunManifest("agreement", _config_of(args), list(args.rater), [args.output], _now())
        _dump_json(args.output, rep.to_dict())
        write_manifest(args.output, m)
    label = "kappa" if len(raters) == 2 else f"mean pairwise kappa over {len(rep.pairwise_kappas)} pairs"
    print(f"{label}: {rep.kappa:.4f} (p_o={rep.observed_agreement:.4f}, p_e={rep.expected_agreement:.4f})")
    return 0


def cmd_sign_test(args) -> int:
    p = sign_test_exact(args.wins, args.losses, two_sided=args.two_sided)
    if args.output:
        m = RunManifest("sign-test", _config_of(args), [], [args.output], _now())
        _dump_json(args.output, {"wins": args.wins, "losses": args.losses, "two_sided": args.two_sided,
                                 "p_exact": f"{p.numerator}/{p.denominator}", "p": float(p)})
        write_manifest(args.output, m)
    print(f"{float(p):.4f} ({p.numerator}/{p.denominator})")
    return 0


def cmd_report(args) -> int:
    header = ["source", "system", "BLEU", "ROUGE-L", "METEOR", *BINARY_METRICS, "accuracy", "macro_f1"]
    rows = []
    for path in args.inputs:
        if not Path(path).exists():
            raise FileNotFoundError(f"report input not found: {path}")
        d = json.loads(Path(path).read_text("utf-8"))
        if "systems" in d:
            for name, s in sorted(d["systems"].items()):
                rows.append([path, name, f"{s['bleu']:.2f}", f"{s['rouge_l']:.4f}", f"{s['meteor']:.4f}",
                             *[("" if s["binary"][m] is None else f"{s['binary'][m]:.3f}") for m in BINARY_METRICS],
                             "", ""])
        elif "confusion_matrix" in d:
            rows.append([path, "classifier", "", "", "", *[""] * len(BINARY_METRICS),
                         f"{d['accuracy']:.4f}", f"{d['macro_f1']:.4f}"])
        else:
            raise UsageError(f"{path} is neither an eval-cmg nor an eval-classify report")
    text = _csv_text(header, rows)
    if args.output:
        m = RunManifest("report", _config_of(args), list(args.inputs), [args.output], _now())
        Path(args.output).write_text(text, "utf-8")
        write_manifest(args.output, m)
    print(text, end="")
    return 0


# --- parser -------------------------------------------------------------------

def _add_judge_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--backend", choices=("rule_based", "chat_endpoint"), default="rule_based")
    p.add_argument("--endpoint-url", default=JudgeConfig.endpoint_url)
    p.add_argument("--model", default=JudgeConfig.model_name)
    p.add_argument("--temperature", type=float, default=0.0)
    p.add_argument("--max-retries", type=int, default=3)
    p.add_argument("--rpm", type=int, default=60, help="request cap per minute")
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="commitforge", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=f"commitforge {__version__}")
    ap.add_argument("--config", help="TOML file with per-subcommand defaults")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=fn)
        return p

    p = add("discover", cmd_discover, "select candidate repositories")
    p.add_argument("--fixture", help="JSON forge fixture instead of the HTTP API")
    p.add_argument("--api-url", default="https://api.github.com")
    p.add_argument("--max-candidates", type=int, default=1000)
    p.add_argument("--min-forks", type=int, default=10)
    p.add_argument("--max-avg-daily-commits", type=float, default=10.0)
    p.add_argument("--min-age-years", type=int, default=2)
    p.add_argument("--max-age-years", type=int, default=10)
    p.add_argument("--earliest", default="2020-01-01")
    p.add_argument("--license", nargs="+", default=["Apache-2.0", "MIT", "BSD-3-Clause"])
    p.add_argument("--now", help="reference date for age checks (default: today)")
    p.add_argument("--output", "-o", required=True)

    p = add("mine", cmd_mine, "walk git histories into a dataset")
    p.add_argument("repos", nargs="+", help="local repository paths")
    p.add_argument("--since", default="2020-01-01")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--content-cap", type=int, default=1 << 20, help="max bytes of file content kept per side")
    p.add_argument("--partial", nargs="*", default=[], help="repo ids tagged as partially compliant")
    p.add_argument("--output", "-o", required=True)

    p = add("filter", cmd_filter, "apply the filter cascade")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--output", "-o", required=True)
    p.add_argument("--dropped", help="also write dropped rows with their provenance")
    p.add_argument("--botlist", help="file of extra bot author names, one per line")
    p.add_argument("--ignore-nonsource", action="store_true")
    p.add_argument("--no-robert-rule", action="store_true")
    p.add_argument("--multiplier", type=float, default=1.5, help="IQR fence multiplier")
    p.add_argument("--outlier-mode", choices=("union", "sequential"), default="union")

    p = add("ast", cmd_ast, "attach structural changes and hunk contexts")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--output", "-o", required=True)
    p.add_argument("--jobs", type=int, default=1)

    p = add("annotate", cmd_annotate, "attach what/why flags")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--output", "-o", required=True)
    p.add_argument("--message-only", action="store_true", help="judge the message without diff context")
    _add_judge_flags(p)

    p = add("stats", cmd_stats, "dataset statistics")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--output", "-o", required=True)
    p.add_argument("--svg-dir")

    p = add("subset", cmd_subset, "draw an evaluation subset")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--output", "-o", required=True)
    p.add_argument("--id", choices=[s for s in SUBSET_IDS if s != "D_all"], required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--per-class", type=int, default=DEFAULT_PER_CLASS)
    p.add_argument("--verified-only", action="store_true")
    p.add_argument("--quota", action="append", metavar="LANG=N",
                   help="per-language quota (repeatable); default " + ", ".join(f"{k}={v}" for k, v in DEFAULT_CMG_QUOTAS.items()))
    p.add_argument("--size", type=int, help="size for D_human / D_ast_cmg / D_ast_ten")

    p = add("eval-classify", cmd_eval_classify, "score type predictions")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--absent-as-zero", action="store_true", help="average over all ten classes")
    p.add_argument("--output", "-o")
    p.add_argument("--csv")

    p = add("eval-cmg", cmd_eval_cmg, "score generated messages")
    p.add_argument("--input", "-i", required=True, help="dataset rows holding the reference messages")
    p.add_argument("--candidates", required=True, help="JSONL of {repo_id, hash, message[, system]}")
    p.add_argument("--no-ast", dest="ast", action="store_false", help="hide AST changes from the judge")
    p.add_argument("--scale100", action="store_true", help="report ROUGE-L and METEOR x100")
    p.add_argument("--output", "-o")
    p.add_argument("--csv")
    _add_judge_flags(p)

    p = add("agreement", cmd_agreement, "Cohen's kappa between raters")
    p.add_argument("--rater", action="append", required=True, help="label file (repeat per rater)")
    p.add_argument("--output", "-o")

    p = add("sign-test", cmd_sign_test, "exact sign test")
    p.add_argument("--wins", type=int, required=True)
    p.add_argument("--losses", type=int, required=True)
    p.add_argument("--two-sided", action="store_true")
    p.add_argument("--output", "-o")

    p = add("report", cmd_report, "tabulate evaluation outputs")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--output", "-o")
    return ap


def _apply_config(ap: argparse.ArgumentParser, argv: Sequence[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    path = Path(known.config)
    if not path.exists():
        raise FileNotFoundError(f"config file not found: {path}")
    try:
        data = tomllib.loads(path.read_text("utf-8"))
    except tomllib.TOMLDecodeError as e:
        raise UsageError(f"{path}: {e}") from None
    subparsers = next(a for a in ap._actions if isinstance(a, argparse._SubParsersAction))
    for section, values in data.items():
        if section not in subparsers.choices:
            raise UsageError(f"{path}: unknown section [{section}]")
        sp = subparsers.choices[section]
        values = {k.replace("-", "_"): v for k, v in values.items()}  # flag spelling or dest spelling
        dests = {a.dest for a in sp._actions}
        for k in values:
            if k not in dests:
                raise UsageError(f"{path}: [{section}] has no option {k!r}")
        for a in sp._actions:
            if a.dest in values:
                a.required = False  # the file supplies it
        sp.set_defaults(**values)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ap = build_parser()
        _apply_config(ap, argv)
        args = ap.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
        if getattr(args, "seed", 0) is None:
            raise UsageError("--seed is required")
        return args.func(args)
    except ENV_ERRORS as e:
        print(f"commitforge: environment error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as e:
        print(f"commitforge: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
