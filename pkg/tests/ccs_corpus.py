"""Hand-labelled commit messages and their expected parse results.

A dict entry lists the expected CcsMessage fields (omitted fields take their
defaults); a string entry is the expected non-compliance reason.
"""
from __future__ import annotations

PARSE_CASES: list[tuple[str, dict | str]] = [
    # plain and scoped headers
    ("feat(parser): add lookahead", {"type": "feat", "scope": "parser", "description": "add lookahead"}),
    ("chore: bump deps", {"type": "chore", "description": "bump deps"}),
    ("docs: explain the fix: step", {"type": "docs", "description": "explain the fix: step"}),
    ("refactor(parser/lexer): split module", {"type": "refactor", "scope": "parser/lexer", "description": "split module"}),
    ("perf(db query): batch inserts", {"type": "perf", "scope": "db query", "description": "batch inserts"}),
    ("build(deps): bump lodash from 4.17.20 to 4.17.21", {"type": "build", "scope": "deps", "description": "bump lodash from 4.17.20 to 4.17.21"}),
    ("ci: run on push", {"type": "ci", "description": "run on push"}),
    ("test(ui): cover modal", {"type": "test", "scope": "ui", "description": "cover modal"}),
    ("style: reformat with black", {"type": "style", "description": "reformat with black"}),
    ("chore(release): v1.2.0", {"type": "chore", "scope": "release", "description": "v1.2.0"}),
    ("feat(i18n): añadir soporte", {"type": "feat", "scope": "i18n", "description": "añadir soporte"}),
    ('fix(parser): handle "quoted" input', {"type": "fix", "scope": "parser", "description": 'handle "quoted" input'}),
    ("test: add cases for x (y)", {"type": "test", "description": "add cases for x (y)"}),
    # case folding
    ("FEAT: shout", {"type": "feat", "description": "shout"}),
    ("Fix(Core): mixed case", {"type": "fix", "scope": "Core", "description": "mixed case"}),
    ("Feat: Capital", {"type": "feat", "description": "Capital"}),
    # breaking marker
    ("fix!: drop null check\n\nBREAKING CHANGE: api removed",
     {"type": "fix", "breaking": True, "description": "drop null check", "footers": [("BREAKING CHANGE", "api removed")]}),
    ("feat(api)!: remove v1 endpoints", {"type": "feat", "scope": "api", "breaking": True, "description": "remove v1 endpoints"}),
    ("refactor!: drop python 3.8", {"type": "refactor", "breaking": True, "description": "drop python 3.8"}),
    ("feat: z\n\nBREAKING-CHANGE: old config keys",
     {"type": "feat", "description": "z", "footers": [("BREAKING-CHANGE", "old config keys")]}),
    # whitespace after the colon
    ("feat:\tadd tab", {"type": "feat", "description": "add tab"}),
    ("feat:   many spaces  ", {"type": "feat", "description": "many spaces"}),
    # bodies and footers
    ("fix: handle crlf\r\n\r\nBody line", {"type": "fix", "description": "handle crlf", "body": "Body line"}),
    ("feat: add x\n\nThis explains why.\n\nRefs: #123",
     {"type": "feat", "description": "add x", "body": "This explains why.", "footers": [("Refs", "#123")]}),
    ("fix: y\n\nCloses #42", {"type": "fix", "description": "y", "footers": [("Closes", "#42")]}),
    ("feat: z\n\nfirst para\n\nsecond para", {"type": "feat", "description": "z", "body": "first para\n\nsecond para"}),
    ("feat: z\n\nbody\n\nReviewed-by: Alice\nRefs: #7",
     {"type": "feat", "description": "z", "body": "body", "footers": [("Reviewed-by", "Alice"), ("Refs", "#7")]}),
    ("fix: w\n\nReviewed-by: Bob\n  continued line",
     {"type": "fix", "description": "w", "footers": [("Reviewed-by", "Bob\n  continued line")]}),
    ("perf: speed up\n\nBenchmarks improved 2x.\n\nSigned-off-by: Dev <dev@example.org>",
     {"type": "perf", "description": "speed up", "body": "Benchmarks improved 2x.",
      "footers": [("Signed-off-by", "Dev <dev@example.org>")]}),
    ("docs: note\nsecond line without blank", {"type": "docs", "description": "note", "body": "second line without blank"}),
    ("feat: something\n\n\n\nextra blank lines", {"type": "feat", "description": "something", "body": "extra blank lines"}),
    ("fix: trailing newline\n", {"type": "fix", "description": "trailing newline"}),
    # malformed
    ("update readme", "missing-colon"),
    ("chore bump deps", "missing-colon"),
    ("wip", "missing-colon"),
    ("Merge pull request #12 from fork/branch", "missing-colon"),
    ("", "missing-colon"),
    ("feat:x", "missing-colon"),
    ("feat !: spaced bang", "missing-colon"),
    ("  feat: leading space", "missing-colon"),
    ("feat(parser)(lexer): double scope", "missing-colon"),
    ("feature: add cache", "unknown-type"),
    ("fixed: typo", "unknown-type"),
    ("revert: undo x", "unknown-type"),
    ("fix: ", "empty-description"),
    ("fix:", "empty-description"),
    ("chore:  ", "empty-description"),
    ("fix(scope: broken", "malformed-scope"),
    ("feat(): empty scope", "malformed-scope"),
    ("fix(a:b): colon in scope", "malformed-scope"),
]

MULTI_TYPE_CASES: list[tuple[str, str, list[str]]] = [
    ("fix: handle nil\nfeat: add flag", "multi_type", ["fix", "feat"]),
    ("feat: add flag", "compliant", ["feat"]),
    ("docs: explain the fix: step", "compliant", ["docs"]),
    ("feat: add cache\n\nfix: broken import", "multi_type", ["feat", "fix"]),
    ("fix(parser): guard\n  refactor: split", "multi_type", ["fix", "refactor"]),
    ("fix: handle nil\nfix: handle nil again", "multi_type", ["fix", "fix"]),
    ("perf: a\ntest: b\nci: c", "multi_type", ["perf", "test", "ci"]),
    ("update readme", "non_compliant", []),
    ("chore: bump\n\nthis will fix: nothing", "compliant", ["chore"]),
]
