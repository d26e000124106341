"""Turn source text into construct observations using tree-sitter grammars.

Each grammar node type is mapped onto zero or more taxonomy kinds. Depth is
not the raw grammar depth: it is the number of *observed* constructs whose
source span encloses the observation, so a top-level construct sits at
depth 0 and the numbers are comparable across the four grammars.
"""

from __future__ import annotations

import functools
import threading
from dataclasses import dataclass

import numpy as np
from tree_sitter import Language, Node, Parser

from ..errors import ParseFailure
from .taxonomy import KIND_BY_NAME, ConstructKind, normalize_language

# Parse failure threshold: share of the file's bytes covered by ERROR nodes
# (each MISSING node counts as one byte).
DEFAULT_MAX_ERROR_FRACTION = 0.02

_COMMON = {
    "if_statement": "if-statement",
    "for_statement": "for-loop",
    "while_statement": "while-loop",
    "return_statement": "return-statement",
    "break_statement": "break-statement",
    "continue_statement": "continue-statement",
}

_C_FAMILY = {
    **_COMMON,
    "function_definition": "function-definition",
    "else_clause": "else-clause",
    "switch_statement": "switch-statement",
    "do_statement": "do-while-loop",
    "call_expression": "call-expression",
    "identifier": "identifier",
    "field_identifier": "identifier",
    "type_identifier": "identifier",
    "statement_identifier": "identifier",
    "number_literal": "numeric-literal",
    "string_literal": "string-literal",
    "char_literal": "string-literal",
    "comment": "comment",
    "binary_expression": "binary-operator",
    "unary_expression": "unary-operator",
    "pointer_expression": "unary-operator",
    "update_expression": "unary-operator",
    "compound_statement": "block",
    "field_declaration_list": "block",
    "parameter_declaration": "parameter",
    "variadic_parameter": "parameter",
}

_NODE_KINDS: dict[str, dict[str, str]] = {
    "c": _C_FAMILY,
    "cpp": {
        **_C_FAMILY,
        "class_specifier": "class-definition",
        "struct_specifier": "class-definition",
        "for_range_loop": "for-loop",
        "try_statement": "try-block",
        "catch_clause": "catch-clause",
        "namespace_identifier": "identifier",
        "raw_string_literal": "string-literal",
        "declaration_list": "block",
        "optional_parameter_declaration": "parameter",
        "variadic_parameter_declaration": "parameter",
    },
    "java": {
        **_COMMON,
        "method_declaration": "function-definition",
        "constructor_declaration": "function-definition",
        "compact_constructor_declaration": "function-definition",
        "class_declaration": "class-definition",
        "interface_declaration": "class-definition",
        "enum_declaration": "class-definition",
        "record_declaration": "class-definition",
        "switch_expression": "switch-statement",
        "switch_statement": "switch-statement",
        "enhanced_for_statement": "for-loop",
        "do_statement": "do-while-loop",
        "try_statement": "try-block",
        "try_with_resources_statement": "try-block",
        "catch_clause": "catch-clause",
        "method_invocation": "call-expression",
        "object_creation_expression": "call-expression",
        "explicit_constructor_invocation": "call-expression",
        "identifier": "identifier",
        "type_identifier": "identifier",
        "decimal_integer_literal": "numeric-literal",
        "hex_integer_literal": "numeric-literal",
        "octal_integer_literal": "numeric-literal",
        "binary_integer_literal": "numeric-literal",
        "decimal_floating_point_literal": "numeric-literal",
        "hex_floating_point_literal": "numeric-literal",
        "string_literal": "string-literal",
        "character_literal": "string-literal",
        "line_comment": "comment",
        "block_comment": "comment",
        "binary_expression": "binary-operator",
        "unary_expression": "unary-operator",
        "update_expression": "unary-operator",
        "block": "block",
        "constructor_body": "block",
        "switch_block": "block",
        "class_body": "block",
        "interface_body": "block",
        "enum_body": "block",
        "formal_parameter": "parameter",
        "spread_parameter": "parameter",
        "receiver_parameter": "parameter",
        "catch_formal_parameter": "parameter",
    },
    "python": {
        **_COMMON,
        "function_definition": "function-definition",
        "class_definition": "class-definition",
        "else_clause": "else-clause",
        "match_statement": "switch-statement",
        "try_statement": "try-block",
        "except_clause": "catch-clause",
        "except_group_clause": "catch-clause",
        "call": "call-expression",
        "identifier": "identifier",
        "integer": "numeric-literal",
        "float": "numeric-literal",
        "string": "string-literal",
        "comment": "comment",
        "binary_operator": "binary-operator",
        "boolean_operator": "binary-operator",
        "comparison_operator": "binary-operator",
        "unary_operator": "unary-operator",
        "not_operator": "unary-operator",
        "block": "block",
    },
}

# Node types whose interiors are never scanned.
_OPAQUE = {"string_literal", "char_literal", "raw_string_literal", "character_literal",
           "string", "comment", "line_comment", "block_comment"}

# Declarations that only count when they carry a body: C++ struct/class
# specifiers (forward declarations and elaborated types are not definitions)
# and Java abstract/interface method signatures.
_NEEDS_BODY = {"cpp": {"class_specifier", "struct_specifier"}, "java": {"method_declaration"}}

_PY_PARAM_LISTS = {"parameters", "lambda_parameters"}
_PY_NON_PARAMS = {"comment", "keyword_separator", "positional_separator"}

_FUNCTION = KIND_BY_NAME["function-definition"]
_CLASS = KIND_BY_NAME["class-definition"]


@dataclass(frozen=True, slots=True)
class ConstructObservation:
    """One occurrence of a construct.

    ``start``/``end`` are character offsets of the source span. ``region`` is
    the scope id of the outermost function or class holding the construct,
    or None for constructs at file level.
    """

    kind: ConstructKind
    depth: int
    length: int
    start: int
    end: int
    enclosing_function: str | None = None
    enclosing_class: str | None = None
    region: str | None = None


def _grammar(language: str) -> Language:
    if language == "c":
        import tree_sitter_c as mod
    elif language == "cpp":
        import tree_sitter_cpp as mod
    elif language == "java":
        import tree_sitter_java as mod
    else:
        import tree_sitter_python as mod
    return Language(mod.language())


@functools.lru_cache(maxsize=None)
def _language(language: str) -> Language:
    return _grammar(language)


_local = threading.local()


def _parser(language: str) -> Parser:
    # Parser objects carry state; one per thread keeps parse_file reentrant.
    cache = getattr(_local, "parsers", None)
    if cache is None:
        cache = _local.parsers = {}
    if language not in cache:
        cache[language] = Parser(_language(language))
    return cache[language]


def decode_source(data: bytes) -> str:
    return data.decode("utf-8", errors="replace")


def _error_fraction(root: Node, nbytes: int) -> float:
    covered = 0
    stack = [root]
    while stack:
        node = stack.pop()
        if node.is_missing:
            covered += 1
        elif node.type == "ERROR":
            covered += max(1, node.end_byte - node.start_byte)
        elif node.has_error:
            stack.extend(node.children)
    return covered / max(1, nbytes)


def _kinds(node: Node, parent_type: str | None, language: str) -> tuple[str, ...]:
    ntype = node.type
    if language == "python":
        names: tuple[str, ...] = ()
        if parent_type in _PY_PARAM_LISTS and ntype not in _PY_NON_PARAMS:
            names = ("parameter",)
        if ntype == "elif_clause":
            return names + ("else-clause", "if-statement")
        mapped = _NODE_KINDS["python"].get(ntype)
        return names + (mapped,) if mapped else names
    if ntype in _NEEDS_BODY.get(language, ()) and node.child_by_field_name("body") is None:
        return ()
    mapped = _NODE_KINDS[language].get(ntype)
    return (mapped,) if mapped else ()


def _raw_spans(root: Node, language: str) -> list[tuple[int, int, int, str]]:
    """Collect ``(start_byte, end_byte, order, kind)`` in pre-order."""
    spans: list[tuple[int, int, int, str]] = []
    stack: list[tuple[Node, str | None]] = [(root, None)]
    while stack:
        node, parent_type = stack.pop()
        if node.type == "ERROR" or node.is_missing:
            continue
        start, end = node.start_byte, node.end_byte
        if language == "python" and node.type == "block" and node.named_child_count:
            # match-statement bodies begin at the newline; blocks start at their first statement
            start = node.named_children[0].start_byte
        if end > start:
            kinds = _kinds(node, parent_type, language)
            if node.type == "number_literal" and node.text[:1] in (b"-", b"+"):
                # the C grammars fold a sign into the literal; split it back out as a unary operator
                spans.append((start, end, len(spans), "unary-operator"))
                start += 1
            for name in kinds:
                spans.append((start, end, len(spans), name))
        if node.type in _OPAQUE:
            continue
        if language == "java" and node.type == "if_statement":
            alternative = node.child_by_field_name("alternative")
            if alternative is not None:
                for child in node.children:
                    if child.type == "else" and not child.is_named:
                        spans.append((child.start_byte, alternative.end_byte, len(spans), "else-clause"))
                        break
        children = node.named_children
        for child in reversed(children):
            stack.append((child, node.type))
    return spans


def _char_offsets(data: bytes, text: str) -> np.ndarray | None:
    """Byte offset -> character offset table, or None for ASCII input."""
    if len(data) == len(text):
        return None
    raw = np.frombuffer(data, dtype=np.uint8)
    starts = (raw & 0xC0) != 0x80
    return np.concatenate(([0], np.cumsum(starts, dtype=np.int64)))


def parse_file(
    source_text: str | bytes,
    language: str,
    *,
    max_error_fraction: float = DEFAULT_MAX_ERROR_FRACTION,
    path: str | None = None,
) -> list[ConstructObservation]:
    """Parse one file and return every construct occurrence in source order.

    Raises ``UnsupportedLanguage`` for unknown languages and ``ParseFailure``
    when the share of the file covered by syntax errors exceeds
    ``max_error_fraction``.
    """
    language = normalize_language(language)
    if isinstance(source_text, bytes):
        text = decode_source(source_text)
    else:
        text = source_text
    data = text.encode("utf-8")
    if not data:
        return []

    tree = _parser(language).parse(data)
    root = tree.root_node
    if root.has_error:
        fraction = _error_fraction(root, len(data))
        if fraction > max_error_fraction:
            raise ParseFailure(f"syntax errors cover {fraction:.1%} of the file", path)

    offsets = _char_offsets(data, text)
    spans = _raw_spans(root, language)
    spans.sort(key=lambda s: (s[0], -s[1], s[2]))

    observations: list[ConstructObservation] = []
    # stack entries: (end_byte, function id, class id, region id)
    stack: list[tuple[int, str | None, str | None, str | None]] = []
    n_functions = n_classes = 0
    for start, end, _, name in spans:
        while stack and (end > stack[-1][0] or start >= stack[-1][0]):
            stack.pop()
        function, klass, region = stack[-1][1:] if stack else (None, None, None)
        kind = KIND_BY_NAME[name]
        if kind is _FUNCTION:
            function = f"function:{n_functions}"
            n_functions += 1
            region = region or function
        elif kind is _CLASS:
            klass = f"class:{n_classes}"
            n_classes += 1
            region = region or klass
        if offsets is None:
            cstart, cend = start, end
        else:
            cstart, cend = int(offsets[start]), int(offsets[end])
        observations.append(ConstructObservation(
            kind=kind,
            depth=len(stack),
            length=cend - cstart,
            start=cstart,
            end=cend,
            enclosing_function=function,
            enclosing_class=klass,
            region=region,
        ))
        stack.append((end, function, klass, region))
    return observations
