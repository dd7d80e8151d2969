"""Sliding-window request limiter with an injectable clock."""
from __future__ import annotations

import threading
import time
from collections import deque
from typing import Callable

WINDOW_S = 60.0


class RateLimiter:
    """At most ``per_minute`` request starts inside any 60-second window.

    Each caller reserves its start slot under a lock, then sleeps outside it,
    so concurrent workers are spread out rather than bunched.
    """

    def __init__(
        self,
        per_minute: int,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if per_minute < 1:
            raise ValueError("per_minute must be at least 1")
        self.per_minute = per_minute
        self.clock = clock
        self.sleep = sleep
        self._starts: deque[float] = deque()
        self._lock = threading.Lock()
        self.history: list[float] = []

    def acquire(self) -> float:
        """Block until a slot is free; return the granted start time."""
        with self._lock:
            now = self.clock()
            start = now
            if len(self._starts) >= self.per_minute:
                start = max(now, self._starts[0] + WINDOW_S)
            self._starts.append(start)
            while len(self._starts) > self.per_minute:
                self._starts.popleft()
            self.history.append(start)
        if start > now:
            self.sleep(start - now)
        return start
