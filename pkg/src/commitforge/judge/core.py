"""Judge front end: backend dispatch, caching and batch evaluation."""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import httpx

from . import rules
from .cache import VerdictCache
from .client import CallStats, ChatClient, parse_json_reply
from .prompts import JudgeContext, binary_prompt, prompt_hash, repair_prompt, what_why_prompt
from .ratelimit import RateLimiter
from .types import (
    BINARY_METRICS,
    BinaryVerdict,
    JudgeConfig,
    JudgeError,
    UnparseableReply,
    WhatWhyFlags,
)

WHAT_WHY_KEYS = ("what", "why")


@dataclass
class CallInfo:
    cache_hit: bool = False
    network_calls: int = 0
    retries: int = 0
    repaired: bool = False
    wall_time_s: float = 0.0


def _context(x: Any) -> JudgeContext:
    return x if isinstance(x, JudgeContext) else JudgeContext.from_commit(x)


class Judge:
    def __init__(
        self,
        cfg: JudgeConfig,
        transport: httpx.BaseTransport | None = None,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
        api_key: str | None = None,
    ):
        self.cfg = cfg
        self.clock = clock
        self.cache = VerdictCache(cfg.cache_dir)
        self.limiter = RateLimiter(cfg.requests_per_minute, clock=clock, sleep=sleep)
        self.client: ChatClient | None = None
        if cfg.backend == "chat_endpoint":
            self.client = ChatClient(cfg, self.limiter, transport=transport, api_key=api_key)

    @property
    def judge_id(self) -> str:
        return self.cfg.judge_id

    def close(self) -> None:
        if self.client is not None:
            self.client.close()

    def _ask(self, prompt: str, keys: Sequence[str], info: CallInfo) -> dict:
        assert self.client is not None
        stats = CallStats()
        messages = [{"role": "user", "content": prompt}]
        try:
            content = self.client.complete(messages, stats)
            try:
                return parse_json_reply(content, keys)
            except UnparseableReply as first:
                info.repaired = True
                messages += [
                    {"role": "assistant", "content": content},
                    {"role": "user", "content": repair_prompt(str(first), keys)},
                ]
                return parse_json_reply(self.client.complete(messages, stats), keys)
        finally:
            info.network_calls += stats.network_calls
            info.retries += stats.retries

    def evaluate_binary_detailed(self, context: Any, candidate: str) -> tuple[BinaryVerdict, CallInfo]:
        if not candidate or not candidate.strip():
            raise ValueError("candidate message is empty")
        t0 = self.clock()
        info = CallInfo()
        ctx = _context(context)
        tpl, prompt = binary_prompt(ctx, candidate)
        h = prompt_hash(tpl, prompt, self.judge_id, self.cfg.model_name, self.cfg.temperature)
        cached = self.cache.get(h, self.judge_id)
        if cached is not None:
            info.cache_hit = True
            verdict = BinaryVerdict.from_dict(cached)
        else:
            if self.client is None:
                verdict = rules.evaluate(ctx, candidate, self.judge_id, h)
            else:
                reply = self._ask(prompt, BINARY_METRICS, info)
                rationales = reply.get("rationales") or {}
                verdict = BinaryVerdict(
                    **{m: reply[m] for m in BINARY_METRICS},
                    rationale_text={m: str(rationales.get(m, "")) for m in BINARY_METRICS},
                    judge_id=self.judge_id,
                    prompt_hash=h,
                )
            self.cache.put(h, self.judge_id, verdict.to_dict())
        info.wall_time_s = self.clock() - t0
        return verdict, info

    def evaluate_binary(self, context: Any, candidate: str) -> BinaryVerdict:
        return self.evaluate_binary_detailed(context, candidate)[0]

    def annotate_what_why(self, commit: Any) -> WhatWhyFlags:
        ctx = _context(commit)
        if not ctx.message.strip():
            raise ValueError("commit has no message")
        tpl, prompt = what_why_prompt(ctx, self.cfg.message_only)
        h = prompt_hash(tpl, prompt, self.judge_id, self.cfg.model_name, self.cfg.temperature)
        cached = self.cache.get(h, self.judge_id)
        if cached is not None:
            return WhatWhyFlags.from_dict(cached)
        if self.client is None:
            flags = rules.annotate(ctx, self.cfg.message_only)
        else:
            reply = self._ask(prompt, WHAT_WHY_KEYS, CallInfo())
            flags = WhatWhyFlags(reply["what"], reply["why"])
        self.cache.put(h, self.judge_id, flags.to_dict())
        return flags


def annotate_what_why(commit: Any, cfg: JudgeConfig, judge: Judge | None = None) -> WhatWhyFlags:
    return (judge or Judge(cfg)).annotate_what_why(commit)


def evaluate_binary(context: Any, candidate: str, cfg: JudgeConfig, judge: Judge | None = None) -> BinaryVerdict:
    return (judge or Judge(cfg)).evaluate_binary(context, candidate)


@dataclass
class ItemFailure:
    index: int
    error: str
    message: str

    def to_dict(self) -> dict:
        return {"index": self.index, "error": self.error, "message": self.message}


@dataclass
class BatchManifest:
    judge_id: str
    config: dict
    items: list[dict] = field(default_factory=list)

    @property
    def totals(self) -> dict:
        return {
            "items": len(self.items),
            "ok": sum(i["status"] == "ok" for i in self.items),
            "failed": sum(i["status"] == "failed" for i in self.items),
            "cache_hits": sum(i["cache"] == "hit" for i in self.items),
            "network_calls": sum(i["network_calls"] for i in self.items),
        }

    def to_dict(self) -> dict:
        return {"judge_id": self.judge_id, "config": self.config, "items": self.items, "totals": self.totals}


def batch_evaluate(
    items: Sequence[tuple[Any, str]],
    cfg: JudgeConfig,
    judge: Judge | None = None,
    jobs: int | None = None,
) -> tuple[list[BinaryVerdict | ItemFailure], BatchManifest]:
    """Evaluate (context, candidate) pairs; failures are recorded, not raised.

    In-flight requests are bounded by the per-minute cap; results come back in
    input order whatever order they finish in.
    """
    judge = judge or Judge(cfg)
    workers = max(1, min(cfg.requests_per_minute, jobs or cfg.requests_per_minute, len(items) or 1))

    def run(idx: int) -> tuple[BinaryVerdict | ItemFailure, dict]:
        ctx, cand = items[idx]
        t0 = judge.clock()
        try:
            verdict, info = judge.evaluate_binary_detailed(ctx, cand)
        except (JudgeError, ValueError, OSError) as e:
            entry = {
                "index": idx,
                "status": "failed",
                "cache": "miss",
                "network_calls": 0,
                "retries": 0,
                "wall_time_s": judge.clock() - t0,
                "error": f"{type(e).__name__}: {e}",
            }
            return ItemFailure(idx, type(e).__name__, str(e)), entry
        entry = {
            "index": idx,
            "status": "ok",
            "cache": "hit" if info.cache_hit else "miss",
            "network_calls": info.network_calls,
            "retries": info.retries,
            "repaired": info.repaired,
            "wall_time_s": info.wall_time_s,
            "prompt_hash": verdict.prompt_hash,
        }
        return verdict, entry

    with ThreadPoolExecutor(max_workers=workers) as pool:
        outcomes = list(pool.map(run, range(len(items))))
    manifest = BatchManifest(judge.judge_id, cfg.to_dict(), [e for _, e in outcomes])
    return [r for r, _ in outcomes], manifest
