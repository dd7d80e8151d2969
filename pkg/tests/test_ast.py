from __future__ import annotations

import difflib
from pathlib import Path

import pytest
from ast_oracles import FILES, HUNKS, STRUCTURES

from commitforge.ast_change import (
    ADDED,
    DELETED,
    KINDS_BY_LANGUAGE,
    MODIFIED,
    HunkContext,
    StructuralChange,
    StructureKind,
    diff_structures,
    extract_declarations,
    manifest_digest,
    map_hunks,
    version_mismatches,
)

ROOT = Path(__file__).parent / "fixtures" / "ast"
LANGS = sorted(FILES)


def load(lang: str) -> tuple[str, str]:
    d, b, a = FILES[lang]
    return (ROOT / d / b).read_text(), (ROOT / d / a).read_text()


def zero_context_diff(before: str, after: str) -> str:
    return "".join(difflib.unified_diff(before.splitlines(True), after.splitlines(True), n=0))


def rows(changes):
    return [(c.kind.value, c.qualified_name, c.change, c.span_before, c.span_after) for c in changes]


@pytest.mark.parametrize("lang", LANGS)
def test_diff_structures_oracle(lang):
    before, after = load(lang)
    assert rows(diff_structures(before, after, lang)) == STRUCTURES[lang]


@pytest.mark.parametrize("lang", LANGS)
def test_map_hunks_oracle(lang):
    before, after = load(lang)
    got = map_hunks(
        zero_context_diff(before, after),
        extract_declarations(before, lang),
        extract_declarations(after, lang),
    )
    assert [(h.hunk, h.side, h.first_changed_line, [(k.value, n) for k, n in h.enclosing_chain]) for h in got] == HUNKS[lang]


@pytest.mark.parametrize("lang", LANGS)
def test_self_diff_empty(lang):
    for text in load(lang):
        assert diff_structures(text, text, lang) == []


@pytest.mark.parametrize("lang", LANGS)
def test_every_kind_in_every_mode(lang):
    seen = {(k, ch) for k, _, ch, _, _ in STRUCTURES[lang]}
    for kind in KINDS_BY_LANGUAGE[lang]:
        for ch in (ADDED, DELETED, MODIFIED):
            if lang == "C" and kind in (StructureKind.CLASS, StructureKind.NAMESPACE):
                continue  # C has no such constructs; the C++ fixture covers them
            assert (kind.value, ch) in seen, (lang, kind, ch)


def test_c_family_table_covered_by_cpp():
    seen = {(k, ch) for k, _, ch, _, _ in STRUCTURES["C++"]}
    for kind in KINDS_BY_LANGUAGE["C"]:
        for ch in (ADDED, DELETED, MODIFIED):
            assert (kind.value, ch) in seen


@pytest.mark.parametrize("lang", LANGS)
def test_whole_file_add_and_delete(lang):
    before, after = load(lang)
    added = diff_structures(None, after, lang)
    assert added and all(c.change == ADDED for c in added)
    assert {c.qualified_name for c in added} == {d.qualified_name for d in extract_declarations(after, lang)}
    deleted = diff_structures(before, None, lang)
    assert deleted and all(c.change == DELETED for c in deleted)


def test_unparseable_side_degrades_to_file_record():
    out = diff_structures("def f(:\n  ))) [[[\n", "def f(x):\n    return x\n", "Python", "a.py")
    assert [(c.kind, c.change, c.span_before, c.span_after) for c in out] == [
        (StructureKind.FILE, MODIFIED, (1, 2), (1, 2))
    ]
    assert diff_structures("x\x00y", None, "Python", "a.py")[0].kind is StructureKind.FILE


def test_unsupported_language_degrades():
    out = diff_structures("a", "b", "Rust", "x.rs")
    assert [c.kind for c in out] == [StructureKind.FILE]


def test_needs_a_side():
    with pytest.raises(ValueError):
        diff_structures(None, None, "Python")


def test_python_decorator_in_span():
    src = "@cache\n@other(1)\ndef f(x):\n    return x\n"
    (d,) = extract_declarations(src, "Python")
    assert (d.kind, d.qualified_name, d.span) == (StructureKind.FUNCTION, "f", (1, 4))


def test_cpp_overloads_get_ordinals():
    src = "int f(int x) { return x; }\nint f(double x) { return 1; }\nint f() { return 0; }\n"
    names = [d.qualified_name for d in extract_declarations(src, "C++")]
    assert names == ["f", "f#2", "f#3"]


def test_cpp_qualified_out_of_line_method():
    src = "namespace n {\nint Shape::area() { return 1; }\n}\n"
    names = [(d.kind.value, d.qualified_name) for d in extract_declarations(src, "C++")]
    assert names == [("Namespace", "n"), ("Function", "n.Shape.area")]


def test_javascript_binding_names_and_anonymous():
    src = (
        "const a = function () {};\n"
        "obj.handler = () => 1;\n"
        "[1].map((x) => x);\n"
        "const K = class {};\n"
    )
    got = [(d.kind.value, d.qualified_name) for d in extract_declarations(src, "JavaScript")]
    assert got == [
        ("Function", "a"),
        ("ArrowFunction", "obj.handler"),
        ("ArrowFunction", "<anonymous>@3:9"),
        ("Class", "K"),
    ]


def test_javascript_object_only_top_level():
    src = "const top = { a: 1 };\nfunction f() { const inner = { b: 2 }; }\nexport const ex = {};\n"
    got = [(d.kind.value, d.qualified_name) for d in extract_declarations(src, "JavaScript")]
    assert got == [("Object", "top"), ("Function", "f"), ("Object", "ex")]


def test_go_pointer_receiver_and_generics():
    src = "package p\n\ntype Box[T any] struct{ v T }\n\nfunc (b *Box[T]) Get() T { return b.v }\n"
    got = [(d.kind.value, d.qualified_name) for d in extract_declarations(src, "Go")]
    assert got == [("Struct", "Box"), ("Function", "Box.Get")]


def test_tsx_uses_tsx_grammar():
    src = "export const View = () => <div>{1}</div>;\n"
    got = [(d.kind.value, d.qualified_name) for d in extract_declarations(src, "TypeScript", "v.tsx")]
    assert got == [("ArrowFunction", "View")]


def test_pure_deletion_inside_method_resolves_old_side():
    before = "class A:\n    def m(self):\n        x = 1\n        return x\n"
    after = "class A:\n    def m(self):\n        return x\n"
    diff = zero_context_diff(before, after)
    (h,) = map_hunks(diff, extract_declarations(before, "Python"), extract_declarations(after, "Python"))
    assert (h.side, h.first_changed_line) == ("old", 3)
    assert h.enclosing_chain == ((StructureKind.CLASS, "A"), (StructureKind.FUNCTION, "A.m"))


def test_hunk_spilling_past_declaration_keeps_first_line_chain():
    before = "def f():\n    return 1\n"
    after = "def f():\n    return 2\n\n\nx = 3\n"
    diff = zero_context_diff(before, after)
    (h,) = map_hunks(diff, extract_declarations(before, "Python"), extract_declarations(after, "Python"))
    assert h.enclosing_chain == ((StructureKind.FUNCTION, "f"),)


def test_orphan_hunk():
    before = "import os\n\ndef f():\n    pass\n"
    after = "import sys\n\ndef f():\n    pass\n"
    (h,) = map_hunks(zero_context_diff(before, after), extract_declarations(before, "Python"),
                     extract_declarations(after, "Python"))
    assert h.orphan and h.to_dict()["orphan"] is True


def test_records_round_trip():
    before, after = load("Java")
    for c in diff_structures(before, after, "Java", "A.java"):
        assert StructuralChange.from_dict(c.to_dict()) == c
    for h in map_hunks(zero_context_diff(before, after), extract_declarations(before, "Java"),
                       extract_declarations(after, "Java"), "A.java"):
        assert HunkContext.from_dict(h.to_dict()) == h


def test_grammar_pins_installed():
    assert version_mismatches() == []
    assert len(manifest_digest()) == 64
