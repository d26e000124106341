"""The fixed construct taxonomy and feature column layout.

Every language maps onto the same 22 construct kinds, so a feature vector
has the same width (22 kinds x 12 metrics = 264) whatever the language.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import UnsupportedLanguage

TAXONOMY_VERSION = "1"


@dataclass(frozen=True, slots=True)
class ConstructKind:
    id: int
    name: str


_KIND_NAMES = (
    "function-definition",
    "class-definition",
    "if-statement",
    "else-clause",
    "switch-statement",
    "for-loop",
    "while-loop",
    "do-while-loop",
    "try-block",
    "catch-clause",
    "return-statement",
    "break-statement",
    "continue-statement",
    "call-expression",
    "identifier",
    "numeric-literal",
    "string-literal",
    "comment",
    "binary-operator",
    "unary-operator",
    "block",
    "parameter",
)

CONSTRUCT_KINDS: tuple[ConstructKind, ...] = tuple(
    ConstructKind(i + 1, name) for i, name in enumerate(_KIND_NAMES)
)
KIND_BY_NAME: dict[str, ConstructKind] = {k.name: k for k in CONSTRUCT_KINDS}

METRICS = (
    "maxCount", "minCount", "avgCount", "stdDevCount",
    "maxDepth", "minDepth", "avgDepth", "stdDevDepth",
    "maxLength", "minLength", "avgLength", "stdDevLength",
)

FEATURE_COLUMNS: tuple[str, ...] = tuple(
    f"{kind.name}_{metric}" for kind in CONSTRUCT_KINDS for metric in METRICS
)
FEATURE_WIDTH = len(FEATURE_COLUMNS)

# language id -> display name
LANGUAGES = {"c": "C", "cpp": "C++", "java": "Java", "python": "Python"}

EXTENSIONS = {
    ".c": "c",
    ".h": "c",
    ".cpp": "cpp",
    ".cc": "cpp",
    ".hpp": "cpp",
    ".java": "java",
    ".py": "python",
}

_ALIASES = {
    "c": "c",
    "cpp": "cpp",
    "c++": "cpp",
    "cxx": "cpp",
    "java": "java",
    "python": "python",
    "py": "python",
}


def normalize_language(language: str) -> str:
    """Map a user-supplied language name onto a language id."""
    try:
        return _ALIASES[language.strip().lower()]
    except KeyError:
        raise UnsupportedLanguage(f"unsupported language: {language!r}") from None


def kind(name: str) -> ConstructKind:
    return KIND_BY_NAME[name]
