"""Generate a planted-signal corpus: two repositories plus a bug export.

Defective files nest control flow 4 to 6 levels deep and use long
identifiers; clean files stay within 1 to 2 levels and use short names.
Both classes draw line counts from the same range so size alone carries
no signal. Every defective file is named by at least one bug, most through
a diff header, a few only in the summary. A seeded ``noise`` fraction of
files has its bug linkage flipped relative to its style, so model
rankings separate instead of tying at a perfect score.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

REPOSITORIES = ("alpha", "beta")
PORTALS = {"alpha": "alpha-tracker", "beta": "beta-tracker"}
EXTENSION = {"c": ".c", "cpp": ".cpp", "java": ".java", "python": ".py"}
LANGUAGE_ORDER = ("c", "cpp", "java", "python")

_WORDS = ("buffer", "record", "packet", "session", "handler", "counter", "cursor", "segment", "payload",
          "request", "channel", "resource", "listener", "context", "registry", "snapshot", "fragment",
          "timeout", "position", "capacity", "element", "iterator", "manager", "pointer", "offset")
_SHORT_HEAD = "qxjz"
_LETTERS = "abcdefghiklmnoprstuvw"
_OS = ("Linux", "Windows", "macOS")
_PRIORITY_BY_DEPTH = {4: "Low", 5: "Medium", 6: "High"}


@dataclass(frozen=True)
class SyntheticFile:
    repository: str
    relative_path: str
    language: str
    defective: bool
    styled_defective: bool
    depth: int
    lines: int


@dataclass
class SyntheticCorpus:
    root: Path
    files: list[SyntheticFile] = field(default_factory=list)
    bugs_path: Path | None = None
    bug_count: int = 0

    @property
    def repositories(self) -> list[Path]:
        return [self.root / "repos" / r for r in REPOSITORIES]

    def defective_paths(self) -> set[str]:
        return {f"{f.repository}/{f.relative_path}" for f in self.files if f.defective}


class _Names:
    def __init__(self, rng: random.Random, long: bool) -> None:
        self.rng = rng
        self.long = long
        self.used: set[str] = set()

    def fresh(self, snake: bool = False) -> str:
        while True:
            name = self._long(snake) if self.long else self._short()
            if name not in self.used:
                self.used.add(name)
                return name

    def _short(self) -> str:
        size = self.rng.randint(3, 6)
        return self.rng.choice(_SHORT_HEAD) + "".join(self.rng.choice(_LETTERS) for _ in range(size - 1))

    def _long(self, snake: bool) -> str:
        target = self.rng.randint(14, 24)
        parts: list[str] = []
        while True:
            word = self.rng.choice(_WORDS)
            joined = self._join(parts + [word], snake)
            if len(joined) > target:
                break
            parts.append(word)
            if len(joined) >= 14 and self.rng.random() < 0.5:
                break
        name = self._join(parts, snake) if parts else ""
        if len(name) < 14:
            name = (name or "value") + "".join(self.rng.choice(_LETTERS) for _ in range(14 - len(name)))
        return name[:target] if len(name) > target else name

    @staticmethod
    def _join(parts: list[str], snake: bool) -> str:
        if snake:
            return "_".join(parts)
        return parts[0] + "".join(p.capitalize() for p in parts[1:]) if parts else ""


def _braced_function(lang: str, names: _Names, depth: int, indent: str) -> list[str]:
    fn, p, q, acc = names.fresh(), names.fresh(), names.fresh(), names.fresh()
    head = (f"{indent}public int {fn}(int {p}, int {q}) {{" if lang == "java"
            else f"{indent}int {fn}(int {p}, int {q}) {{")
    body = [head, f"{indent}    int {acc} = 0;"]
    closers = []
    for level in range(depth):
        pad = indent + "    " * (level + 1)
        kind = level % 3
        if kind == 0:
            body.append(f"{pad}if ({p} > {level}) {{")
        elif kind == 1:
            var = names.fresh()
            body.append(f"{pad}for (int {var} = 0; {var} < {q}; {var}++) {{")
        else:
            body.append(f"{pad}while ({acc} < {q}) {{")
        closers.append(f"{pad}}}")
    body.append(f"{indent}{'    ' * (depth + 1)}{acc} = {acc} + {q};")
    body += reversed(closers)
    body += [f"{indent}    return {acc};", f"{indent}}}"]
    return body


def _python_function(names: _Names, depth: int) -> list[str]:
    fn, p, q, acc = (names.fresh(snake=True) for _ in range(4))
    body = [f"def {fn}({p}, {q}):", f"    {acc} = 0"]
    for level in range(depth):
        pad = "    " * (level + 1)
        kind = level % 3
        if kind == 0:
            body.append(f"{pad}if {p} > {level}:")
        elif kind == 1:
            body.append(f"{pad}for {names.fresh(snake=True)} in range({q}):")
        else:
            body.append(f"{pad}while {acc} < {q}:")
    body.append(f"{'    ' * (depth + 1)}{acc} = {acc} + {q}")
    body.append(f"    return {acc}")
    return body


def generate_source(language: str, defective: bool, target_lines: int, rng: random.Random) -> tuple[str, int]:
    """Return (source text, deepest nest) with exactly ``target_lines`` newline-separated lines."""
    names = _Names(rng, long=defective)
    lo, hi = (4, 6) if defective else (1, 2)
    header: list[str] = []
    footer: list[str] = []
    indent = ""
    if language == "java":
        header, footer, indent = [f"public class {names.fresh().capitalize()} {{"], ["}"], "    "
    elif language == "c":
        header = ["#include <stdio.h>", ""]
    elif language == "cpp":
        header = ["#include <vector>", ""]

    def build(depth: int) -> list[str]:
        if language == "python":
            return _python_function(names, depth)
        return _braced_function(language, names, depth, indent)

    functions: list[list[str]] = []
    deepest = 0
    used = len(header) + len(footer)
    while True:
        depth = rng.randint(lo, hi)
        fn = build(depth)
        separator = 1 if functions else 0
        if used + separator + len(fn) > target_lines:
            break
        functions.append(fn)
        deepest = max(deepest, depth)
        used += separator + len(fn)
    if not functions:
        depth = lo
        functions.append(build(depth))
        deepest = depth
        used += len(functions[0])
    slack = target_lines - used
    if slack > 0:
        last = functions[-1]
        step = "    " + indent
        acc = last[1].split("=")[0].split()[-1]
        semicolon = "" if language == "python" else ";"
        extra = [f"{step}{acc} = {acc} + {i + 7}{semicolon}" for i in range(slack)]
        functions[-1] = last[:2] + extra + last[2:]
    lines = list(header)
    for i, fn in enumerate(functions):
        if i:
            lines.append("")
        lines.extend(fn)
    lines.extend(footer)
    return "\n".join(lines), deepest


def _bug(bug_id: str, portal: str, summary: str, patch: str | None, rng: random.Random, depth: int,
         index: int) -> dict:
    record = {
        "bug_id": bug_id,
        "portal": portal,
        "summary": summary,
        "priority": _PRIORITY_BY_DEPTH.get(depth, "Unspecified"),
        "status": "RESOLVED",
        "type": "Enhancement" if index % 3 == 0 else "BugFix",
        "os": _OS[index % len(_OS)],
        "hardware": "x86_64",
        "comment_count": rng.randint(0, 30),
    }
    if patch is not None:
        record["patch"] = patch
    return record


def _patch(path: str) -> str:
    return (f"diff --git a/{path} b/{path}\n--- a/{path}\n+++ b/{path}\n"
            "@@ -1,3 +1,3 @@\n-old line\n+new line\n")


def generate_corpus(root: str | Path, per_language: int = 50, seed: int = 42,
                    line_range: tuple[int, int] = (40, 60), noise: float = 0.05) -> SyntheticCorpus:
    """Write ``per_language`` files per language, half defective-styled, split over two repositories.

    ``defective`` on each file records whether bugs link to it; it differs
    from ``styled_defective`` only for the ``noise`` fraction.
    """
    rng = random.Random(seed)
    root = Path(root)
    corpus = SyntheticCorpus(root)
    bugs: list[dict] = []
    serial = 0
    for language in LANGUAGE_ORDER:
        for n in range(per_language):
            styled = n % 2 == 0
            defective = styled != (rng.random() < noise)
            repo = REPOSITORIES[(n // 2) % len(REPOSITORIES)]
            target = rng.randint(*line_range)
            text, depth = generate_source(language, styled, target, rng)
            stem = f"{'mod' if styled else 'util'}_{language}_{n:03d}"
            if language == "java":
                stem = stem.title().replace("_", "")
            relative = f"src/{language}/{stem}{EXTENSION[language]}"
            path = root / "repos" / repo / relative
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text + "\n", encoding="utf-8")
            corpus.files.append(SyntheticFile(repo, relative, language, defective, styled, depth, target + 1))
            if not defective:
                continue
            portal = PORTALS[repo]
            serial += 1
            if serial % 7 == 0:
                summary = f"Crash reported in {Path(relative).name} under load"
                bugs.append(_bug(f"{repo.upper()}-{serial}", portal, summary, None, rng, depth, serial))
            else:
                bugs.append(_bug(f"{repo.upper()}-{serial}", portal, f"Fix failure in module {serial}",
                                 _patch(relative), rng, depth, serial))
            if serial % 4 == 0:
                serial += 1
                bugs.append(_bug(f"{repo.upper()}-{serial}", portal, "Follow-up fix",
                                 _patch(relative), rng, depth, serial))
    for extra in range(5):
        serial += 1
        repo = REPOSITORIES[extra % 2]
        bugs.append(_bug(f"{repo.upper()}-{serial}", PORTALS[repo], "Documentation typo in user guide",
                         None, rng, 0, serial))
    corpus.bugs_path = root / "bugs.jsonl"
    corpus.bugs_path.write_text("".join(json.dumps(b, sort_keys=True) + "\n" for b in bugs), encoding="utf-8")
    corpus.bug_count = len(bugs)
    return corpus
