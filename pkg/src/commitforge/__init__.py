"""Mining, filtering and evaluating conventional commit messages."""
from __future__ import annotations

__version__ = "0.1.0"
