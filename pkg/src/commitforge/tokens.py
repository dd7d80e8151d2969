"""Word/punctuation tokenizer shared by the outlier filter and the text metrics."""
from __future__ import annotations

import re

# a maximal run of word characters, or any single non-space punctuation char
TOKEN_RE = re.compile(r"\w+|[^\w\s]")


def tokenize(text: str, lower: bool = False) -> list[str]:
    if lower:
        text = text.lower()
    return TOKEN_RE.findall(text)


def count_tokens(text: str) -> int:
    return sum(1 for _ in TOKEN_RE.finditer(text))
