"""Source spans and diagnostics shared by every analysis pass."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable


@dataclass(frozen=True, order=True)
class Span:
    """A region of one source file; lines and columns are 1-based."""

    file: str
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"


NO_SPAN = Span("<unknown>", 0, 0, 0, 0)


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


# Codes whose diagnostics are warnings unless stated otherwise at the call site.
WARNING_CODES = frozenset({"CV1", "CV2", "CV3", "CV4", "CV5", "CV6", "S001"})


@dataclass(frozen=True)
class Diagnostic:
    code: str
    severity: Severity
    span: Span
    message: str
    related: tuple[Span, ...] = field(default=(), compare=False)

    @classmethod
    def error(cls, code: str, span: Span | None, message: str, related: Iterable[Span] = ()) -> Diagnostic:
        return cls(code, Severity.ERROR, span or NO_SPAN, message, tuple(related))

    @classmethod
    def warning(cls, code: str, span: Span | None, message: str, related: Iterable[Span] = ()) -> Diagnostic:
        return cls(code, Severity.WARNING, span or NO_SPAN, message, tuple(related))

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def sort_key(self) -> tuple:
        return (self.span.file, self.span.line, self.span.col, self.code, self.message)

    def format(self) -> str:
        s = self.span
        return f"{s.file}:{s.line}:{s.col}: {self.severity.value} {self.code}: {self.message}"


def sort_diagnostics(diags: Iterable[Diagnostic]) -> list[Diagnostic]:
    """Sort by (file, line, column, code) and drop exact duplicates."""
    seen = set()
    out = []
    for d in sorted(diags, key=Diagnostic.sort_key):
        key = (d.code, d.severity, d.span, d.message)
        if key in seen:
            continue
        seen.add(key)
        out.append(d)
    return out


def format_diagnostics(diags: Iterable[Diagnostic]) -> str:
    return "".join(d.format() + "\n" for d in sort_diagnostics(diags))


def has_errors(diags: Iterable[Diagnostic]) -> bool:
    return any(d.is_error for d in diags)
