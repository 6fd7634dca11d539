"""Source positions and parse diagnostics."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    begin: int
    end: int
    line: int
    column: int

    def __post_init__(self) -> None:
        if self.begin > self.end:
            raise ValueError("span runs backwards")


@dataclass(frozen=True)
class ParseDiagnostic:
    span: SourceSpan
    message: str
    kind: str  # lexical | syntactic | keyword-misuse

    def __post_init__(self) -> None:
        if not self.message:
            raise ValueError("diagnostic needs a message")


class LinguaParseError(Exception):
    def __init__(self, diagnostic: ParseDiagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


def format_diagnostic(diag: ParseDiagnostic, filename: str = "<input>") -> str:
    return f"{filename}:{diag.span.line}:{diag.span.column}: {diag.kind}: {diag.message}"
