"""Declaration extraction per language.

Each declaration gets a dotted ``qualified_name`` built from the enclosing
declarations (``A.m``). Unnamed nodes are named ``<anonymous>@line:col``
(1-based). Arrow functions, function expressions and class expressions bound
directly to a variable, property, class field or assignment take that
binding's name instead. A repeated ``(kind, qualified_name)`` pair, such as a
C++ overload, gets an ordinal suffix in source order: ``f``, ``f#2``, ``f#3``.

JavaScript ``Object`` declarations are object literals bound by a top-level
``const``/``let``/``var`` declarator (optionally under ``export``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import tree_sitter

from ..languages import C, CPP, GO, JAVA, JAVASCRIPT, PYTHON, TYPESCRIPT
from .grammars import get_parser


class StructureKind(str, Enum):
    FUNCTION = "Function"
    CLASS = "Class"
    STRUCT = "Struct"
    ENUM = "Enum"
    NAMESPACE = "Namespace"
    METHOD = "Method"
    INTERFACE = "Interface"
    ANNOTATION = "Annotation"
    ASYNC_FUNCTION = "AsyncFunction"
    ARROW_FUNCTION = "ArrowFunction"
    OBJECT = "Object"
    TYPE_ALIAS = "TypeAlias"
    # degraded whole-file record for unparseable sources; not a declaration kind
    FILE = "File"

    def __str__(self) -> str:
        return self.value


K = StructureKind
_C_FAMILY = frozenset({K.FUNCTION, K.CLASS, K.STRUCT, K.ENUM, K.NAMESPACE})
KINDS_BY_LANGUAGE: dict[str, frozenset[StructureKind]] = {
    C: _C_FAMILY,
    CPP: _C_FAMILY,
    JAVA: frozenset({K.METHOD, K.CLASS, K.INTERFACE, K.ENUM, K.ANNOTATION}),
    PYTHON: frozenset({K.FUNCTION, K.CLASS, K.ASYNC_FUNCTION}),
    GO: frozenset({K.FUNCTION, K.STRUCT, K.INTERFACE}),
    JAVASCRIPT: frozenset({K.FUNCTION, K.CLASS, K.METHOD, K.ARROW_FUNCTION, K.OBJECT}),
    TYPESCRIPT: frozenset(
        {K.FUNCTION, K.CLASS, K.METHOD, K.INTERFACE, K.TYPE_ALIAS, K.ENUM, K.ARROW_FUNCTION}
    ),
}

# share of source bytes covered by ERROR nodes above which a file counts as unparseable
MAX_ERROR_SHARE = 0.5


class ParseFailure(ValueError):
    pass


@dataclass(frozen=True)
class Declaration:
    kind: StructureKind
    qualified_name: str
    span: tuple[int, int]
    depth: int = field(default=0, compare=False)
    text: str = field(default="", compare=False, repr=False)

    def as_tuple(self) -> tuple[str, str, tuple[int, int]]:
        return (self.kind.value, self.qualified_name, self.span)


def _text(node: tree_sitter.Node | None) -> str | None:
    return node.text.decode("utf-8", errors="replace") if node is not None else None


def _anonymous(node: tree_sitter.Node) -> str:
    row, col = node.start_point
    return f"<anonymous>@{row + 1}:{col + 1}"


def _field_is(parent: tree_sitter.Node, name: str, node: tree_sitter.Node) -> bool:
    child = parent.child_by_field_name(name)
    return child is not None and child.id == node.id


def _binding_name(node: tree_sitter.Node) -> str | None:
    """Name of the variable/property an expression node is directly bound to."""
    parent = node.parent
    if parent is None:
        return None
    t = parent.type
    if t == "variable_declarator" and _field_is(parent, "value", node):
        return _text(parent.child_by_field_name("name"))
    if t == "pair" and _field_is(parent, "value", node):
        return _text(parent.child_by_field_name("key"))
    if t == "field_definition" and _field_is(parent, "value", node):
        return _text(parent.child_by_field_name("property"))
    if t == "public_field_definition" and _field_is(parent, "value", node):
        return _text(parent.child_by_field_name("name"))
    if t == "assignment_expression" and _field_is(parent, "right", node):
        return _text(parent.child_by_field_name("left"))
    return None


def _name_or_anon(node: tree_sitter.Node, field_name: str = "name") -> str:
    return _text(node.child_by_field_name(field_name)) or _anonymous(node)


# --- per-language classifiers: node -> (kind, name) or None -----------------------

def _python(node):
    t = node.type
    if t == "function_definition":
        is_async = any(c.type == "async" for c in node.children)
        return (K.ASYNC_FUNCTION if is_async else K.FUNCTION), _name_or_anon(node)
    if t == "class_definition":
        return K.CLASS, _name_or_anon(node)
    return None


_C_NAME_TYPES = {
    "identifier",
    "field_identifier",
    "qualified_identifier",
    "operator_name",
    "destructor_name",
    "template_function",
    "type_identifier",
}


def _c_function_name(node) -> str | None:
    d = node.child_by_field_name("declarator")
    while d is not None and d.type not in _C_NAME_TYPES:
        nxt = d.child_by_field_name("declarator")
        if nxt is None:
            # parenthesized declarators and friends keep the name one level down
            nxt = next((c for c in d.named_children if c.type not in ("parameter_list",)), None)
        d = nxt
    name = _text(d)
    return name.replace("::", ".") if name else None


def _c_family(node):
    t = node.type
    if t == "function_definition":
        return K.FUNCTION, _c_function_name(node) or _anonymous(node)
    if t in ("class_specifier", "struct_specifier", "enum_specifier"):
        if node.child_by_field_name("body") is None:
            return None
        kind = {"class_specifier": K.CLASS, "struct_specifier": K.STRUCT, "enum_specifier": K.ENUM}[t]
        return kind, _name_or_anon(node)
    if t == "namespace_definition":
        name = _text(node.child_by_field_name("name"))
        return K.NAMESPACE, name.replace("::", ".") if name else _anonymous(node)
    return None


_JAVA = {
    "method_declaration": K.METHOD,
    "constructor_declaration": K.METHOD,
    "class_declaration": K.CLASS,
    "interface_declaration": K.INTERFACE,
    "enum_declaration": K.ENUM,
    "annotation_type_declaration": K.ANNOTATION,
}


def _java(node):
    kind = _JAVA.get(node.type)
    return (kind, _name_or_anon(node)) if kind else None


def _go_receiver_type(node) -> str | None:
    recv = node.child_by_field_name("receiver")
    if recv is None:
        return None
    for param in recv.named_children:
        if param.type != "parameter_declaration":
            continue
        t = param.child_by_field_name("type")
        while t is not None and t.type in ("pointer_type", "generic_type", "parenthesized_type"):
            t = t.child_by_field_name("type") or (t.named_children[0] if t.named_children else None)
        return _text(t)
    return None


def _go(node):
    t = node.type
    if t == "function_declaration":
        return K.FUNCTION, _name_or_anon(node)
    if t == "method_declaration":
        name = _name_or_anon(node)
        recv = _go_receiver_type(node)
        return K.FUNCTION, f"{recv}.{name}" if recv else name
    if t == "type_spec":
        body = node.child_by_field_name("type")
        if body is not None and body.type == "struct_type":
            return K.STRUCT, _name_or_anon(node)
        if body is not None and body.type == "interface_type":
            return K.INTERFACE, _name_or_anon(node)
    return None


def _is_top_level_object(node) -> bool:
    value = node.child_by_field_name("value")
    if value is None or value.type != "object":
        return False
    decl = node.parent
    if decl is None or decl.type not in ("lexical_declaration", "variable_declaration"):
        return False
    holder = decl.parent
    if holder is not None and holder.type == "export_statement":
        holder = holder.parent
    return holder is not None and holder.type == "program"


def _ecmascript(node, typescript: bool):
    t = node.type
    if t in ("function_declaration", "generator_function_declaration"):
        return K.FUNCTION, _name_or_anon(node)
    if t in ("function_expression", "function", "generator_function"):
        name = _text(node.child_by_field_name("name")) or _binding_name(node) or _anonymous(node)
        return K.FUNCTION, name
    if t in ("class_declaration", "abstract_class_declaration"):
        return K.CLASS, _name_or_anon(node)
    if t == "class":
        return K.CLASS, _text(node.child_by_field_name("name")) or _binding_name(node) or _anonymous(node)
    if t == "method_definition" or (typescript and t == "abstract_method_signature"):
        return K.METHOD, _name_or_anon(node)
    if t == "arrow_function":
        return K.ARROW_FUNCTION, _binding_name(node) or _anonymous(node)
    if typescript:
        if t == "interface_declaration":
            return K.INTERFACE, _name_or_anon(node)
        if t == "type_alias_declaration":
            return K.TYPE_ALIAS, _name_or_anon(node)
        if t == "enum_declaration":
            return K.ENUM, _name_or_anon(node)
    elif t == "variable_declarator" and _is_top_level_object(node):
        return K.OBJECT, _name_or_anon(node)
    return None


_CLASSIFIERS = {
    PYTHON: _python,
    C: _c_family,
    CPP: _c_family,
    JAVA: _java,
    GO: _go,
    JAVASCRIPT: lambda n: _ecmascript(n, False),
    TYPESCRIPT: lambda n: _ecmascript(n, True),
}


def _span_node(node, language: str):
    # decorators belong to the definition they decorate
    if language == PYTHON and node.parent is not None and node.parent.type == "decorated_definition":
        return node.parent
    return node


# Point.row/.column attribute access crashes tree-sitter 0.26.0 under load; unpack instead
def _line_span(node) -> tuple[int, int]:
    start_row, _ = node.start_point
    end_row, end_col = node.end_point
    start = start_row + 1
    end = end_row + (1 if end_col > 0 else 0)
    return start, max(start, end)


def _error_share(root) -> float:
    total = max(root.end_byte - root.start_byte, 1)
    covered = 0
    stack = [root]
    while stack:
        n = stack.pop()
        if n.type == "ERROR":
            covered += n.end_byte - n.start_byte
            continue
        if n.has_error:
            stack.extend(n.children)
    return covered / total


def parse(source: str, language: str, path: str | None = None) -> tree_sitter.Tree:
    if language not in _CLASSIFIERS:
        raise ParseFailure(f"unsupported language {language!r}")
    if "\x00" in source:
        raise ParseFailure("binary content")
    tree = get_parser(language, path).parse(source.encode("utf-8"))
    if tree.root_node.has_error and _error_share(tree.root_node) > MAX_ERROR_SHARE:
        raise ParseFailure("mostly unparseable source")
    return tree


def extract_declarations(source: str, language: str, path: str | None = None) -> list[Declaration]:
    """All declarations of the language's structure kinds, in source order.

    Spans are 1-based inclusive line ranges.
    """
    tree = parse(source, language, path)
    classify = _CLASSIFIERS[language]
    out: list[Declaration] = []
    seen: dict[tuple[StructureKind, str], int] = {}
    stack: list[tuple[tree_sitter.Node, tuple[str, ...]]] = [(tree.root_node, ())]
    while stack:
        node, chain = stack.pop()
        child_chain = chain
        hit = classify(node) if node.is_named else None
        if hit is not None:
            kind, name = hit
            qname = ".".join((*chain, name))
            seen[(kind, qname)] = n = seen.get((kind, qname), 0) + 1
            if n > 1:
                qname = f"{qname}#{n}"
                name = f"{name}#{n}"
            span_node = _span_node(node, language)
            out.append(
                Declaration(
                    kind=kind,
                    qualified_name=qname,
                    span=_line_span(span_node),
                    depth=len(chain),
                    text=_text(span_node) or "",
                )
            )
            child_chain = (*chain, name)
        for child in reversed(node.children):
            stack.append((child, child_chain))
    return out
