"""What/why annotation and reference-free binary evaluation of commit messages."""
from __future__ import annotations

from .cache import VerdictCache
from .client import KEY_ENV, MissingCredential, parse_json_reply
from .core import BatchManifest, Judge, ItemFailure, annotate_what_why, batch_evaluate, evaluate_binary
from .prompts import JudgeContext, load_template
from .ratelimit import RateLimiter
from .rules import CAUSAL_MARKERS
from .types import (
    BINARY_METRICS,
    BinaryVerdict,
    EndpointUnreachable,
    JudgeConfig,
    JudgeError,
    UnparseableReply,
    VerdictIncomplete,
    WhatWhyFlags,
)

__all__ = [
    "BINARY_METRICS",
    "BatchManifest",
    "BinaryVerdict",
    "CAUSAL_MARKERS",
    "EndpointUnreachable",
    "ItemFailure",
    "Judge",
    "JudgeConfig",
    "JudgeContext",
    "JudgeError",
    "KEY_ENV",
    "MissingCredential",
    "RateLimiter",
    "UnparseableReply",
    "VerdictCache",
    "VerdictIncomplete",
    "WhatWhyFlags",
    "annotate_what_why",
    "batch_evaluate",
    "evaluate_binary",
    "load_template",
    "parse_json_reply",
]
