"""Exception hierarchy shared by all pipeline stages."""

from __future__ import annotations


class DefectscopeError(Exception):
    """Base class for every error raised by this package."""


class DataError(DefectscopeError):
    """Input data is unusable; the CLI maps these to exit code 2."""


class UnsupportedLanguage(DefectscopeError, ValueError):
    pass


class ParseFailure(DataError):
    """A source file could not be parsed into a usable syntax tree."""

    def __init__(self, message: str, path: str | None = None) -> None:
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class MalformedRecord(DataError):
    def __init__(self, line_number: int, message: str) -> None:
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class DuplicateBugId(DataError):
    def __init__(self, line_number: int, portal: str, bug_id: str) -> None:
        self.line_number = line_number
        self.portal = portal
        self.bug_id = bug_id
        super().__init__(f"line {line_number}: duplicate bug {portal}/{bug_id}")


class IntegrityViolation(DataError):
    pass


class SchemaMismatch(DataError):
    pass


class EmptyDataset(DataError):
    pass


class DegenerateLabels(DataError):
    pass


class WidthMismatch(DataError):
    def __init__(self, expected: int, got: int) -> None:
        self.expected = expected
        self.got = got
        super().__init__(f"vector width {got} does not match training width {expected}")


class KTooLarge(DefectscopeError, ValueError):
    pass


class ClassTooSmall(DataError):
    pass


class MissingPhase2Model(DataError, KeyError):
    def __str__(self) -> str:
        return f"no phase-2 model trained for characteristic {self.args[0]!r}"


class FoldError(DataError):
    """A learner error raised while training or scoring one cross-validation fold."""

    def __init__(self, fold: int, cause: Exception) -> None:
        self.fold = fold
        self.cause = cause
        super().__init__(f"fold {fold}: {cause}")
