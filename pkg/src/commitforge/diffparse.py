"""Minimal unified-diff hunk parser."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

HUNK_HEADER = re.compile(r"^@@ -(\d+)(?:,(\d+))? \+(\d+)(?:,(\d+))? @@")


class MalformedDiff(ValueError):
    pass


@dataclass
class Hunk:
    old_start: int
    old_len: int
    new_start: int
    new_len: int
    added: list[int] = field(default_factory=list)  # new-side line numbers of '+' lines
    deleted: list[int] = field(default_factory=list)  # old-side line numbers of '-' lines

    @property
    def header(self) -> tuple[int, int, int, int]:
        return (self.old_start, self.old_len, self.new_start, self.new_len)


def parse_hunks(diff: str) -> list[Hunk]:
    """Parse every ``@@`` hunk in ``diff``; file headers before a hunk are skipped.

    Raises :class:`MalformedDiff` when a hunk body disagrees with its header counts.
    """
    hunks: list[Hunk] = []
    cur: Hunk | None = None
    old_left = new_left = 0
    old_no = new_no = 0
    for lineno, line in enumerate(diff.split("\n"), 1):
        if cur is not None and (old_left > 0 or new_left > 0):
            tag = line[:1]
            if tag == "\\":
                continue
            if tag in (" ", ""):
                old_left -= 1
                new_left -= 1
                old_no += 1
                new_no += 1
            elif tag == "-":
                cur.deleted.append(old_no)
                old_left -= 1
                old_no += 1
            elif tag == "+":
                cur.added.append(new_no)
                new_left -= 1
                new_no += 1
            else:
                raise MalformedDiff(f"line {lineno}: unexpected line inside hunk: {line!r}")
            if old_left < 0 or new_left < 0:
                raise MalformedDiff(f"line {lineno}: hunk body longer than its header")
            continue
        m = HUNK_HEADER.match(line)
        if m:
            o_start, o_len, n_start, n_len = (
                int(m.group(1)),
                int(m.group(2)) if m.group(2) is not None else 1,
                int(m.group(3)),
                int(m.group(4)) if m.group(4) is not None else 1,
            )
            cur = Hunk(o_start, o_len, n_start, n_len)
            hunks.append(cur)
            old_left, new_left = o_len, n_len
            # zero-length sides report the line *before* the change
            old_no = o_start if o_len else o_start + 1
            new_no = n_start if n_len else n_start + 1
        elif line.startswith("\\"):
            continue
        elif cur is not None and line and line[0] in "+- " and not line.startswith(("+++", "---")):
            raise MalformedDiff(f"line {lineno}: content after hunk end: {line!r}")
    if cur is not None and (old_left > 0 or new_left > 0):
        raise MalformedDiff("diff truncated inside the last hunk")
    return hunks


def count_changes(diff: str) -> tuple[int, int]:
    """(added, deleted) line counts recomputed from the hunks."""
    hunks = parse_hunks(diff)
    return sum(len(h.added) for h in hunks), sum(len(h.deleted) for h in hunks)
