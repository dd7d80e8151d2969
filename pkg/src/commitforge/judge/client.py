"""Chat-completions transport and strict JSON reply parsing."""
from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from typing import Callable, Sequence

import httpx

from .ratelimit import RateLimiter
from .types import EndpointUnreachable, JudgeConfig, JudgeError, UnparseableReply, VerdictIncomplete

KEY_ENV = "COMMITFORGE_JUDGE_KEY"
_FENCE_RE = re.compile(r"```(?:json)?\s*(\{.*?\})\s*```", re.S)


class MissingCredential(JudgeError):
    pass


_TRUTHY = {"true": True, "yes": True, "y": True, "1": True, "false": False, "no": False, "n": False, "0": False}


def _as_bool(v) -> bool | None:
    if isinstance(v, bool):
        return v
    if isinstance(v, int) and v in (0, 1):
        return bool(v)
    if isinstance(v, str):
        return _TRUTHY.get(v.strip().lower())
    return None


def parse_json_reply(content: str, keys: Sequence[str]) -> dict:
    """Extract the fenced (or bare) JSON object and coerce ``keys`` to booleans.

    Raises :class:`VerdictIncomplete` when the object parses but lacks a key or
    holds a non-boolean value, :class:`UnparseableReply` when no object parses.
    """
    m = _FENCE_RE.search(content)
    blob = m.group(1) if m else content[content.find("{"): content.rfind("}") + 1]
    try:
        obj = json.loads(blob)
    except (json.JSONDecodeError, ValueError):
        raise UnparseableReply("reply holds no JSON object", content) from None
    if not isinstance(obj, dict):
        raise UnparseableReply("reply JSON is not an object", content)
    out = dict(obj)
    bad = []
    for k in keys:
        b = _as_bool(obj.get(k))
        if b is None:
            bad.append(k)
        else:
            out[k] = b
    if bad:
        raise VerdictIncomplete(f"missing or non-boolean fields: {', '.join(bad)}", content)
    return out


@dataclass
class CallStats:
    network_calls: int = 0
    retries: int = 0


class ChatClient:
    """POST ``{model, messages, temperature}`` to ``<endpoint>/chat/completions``."""

    def __init__(
        self,
        cfg: JudgeConfig,
        limiter: RateLimiter,
        transport: httpx.BaseTransport | None = None,
        api_key: str | None = None,
        sleep: Callable[[float], None] | None = None,
    ):
        key = api_key if api_key is not None else os.environ.get(KEY_ENV)
        if not key:
            raise MissingCredential(f"set {KEY_ENV} to use the chat_endpoint judge backend")
        self.cfg = cfg
        self.limiter = limiter
        self.sleep = sleep or limiter.sleep
        self.url = cfg.endpoint_url.rstrip("/") + "/chat/completions"
        self._http = httpx.Client(
            transport=transport,
            timeout=cfg.timeout_s,
            headers={"Authorization": f"Bearer {key}", "Content-Type": "application/json"},
        )

    def close(self) -> None:
        self._http.close()

    def complete(self, messages: list[dict], stats: CallStats) -> str:
        body = {"model": self.cfg.model_name, "messages": messages, "temperature": self.cfg.temperature}
        last = ""
        for attempt in range(self.cfg.max_retries + 1):
            if attempt:
                stats.retries += 1
                self.sleep(min(2.0**attempt, 30.0))
            self.limiter.acquire()
            stats.network_calls += 1
            try:
                resp = self._http.post(self.url, json=body)
            except httpx.TransportError as e:
                last = f"{type(e).__name__}: {e}"
                continue
            if resp.status_code == 429 or resp.status_code >= 500:
                last = f"HTTP {resp.status_code}"
                continue
            if resp.status_code >= 400:
                raise EndpointUnreachable(f"{self.url} rejected the request: HTTP {resp.status_code} {resp.text[:200]}")
            try:
                return resp.json()["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError):
                raise UnparseableReply("response is not a chat-completions object", resp.text[:500]) from None
        raise EndpointUnreachable(f"{self.url} unreachable after {self.cfg.max_retries + 1} attempts ({last})")
