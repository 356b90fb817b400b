"""Tokenizer for MontiArc source text.

Characters the language does not use are emitted as ``OTHER`` tokens instead
of failing, because invariant bodies are written in foreign languages (OCL,
Java) and are captured verbatim. The parser rejects ``OTHER`` everywhere else.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from montiarc.diagnostics import Span

KEYWORDS = frozenset(
    {
        "component", "port", "in", "out", "connect", "extends",
        "autoconnect", "autoinstantiate", "behavior", "inv",
        "type", "off", "on", "timed", "untimed", "timesynchronous",
        "package", "import", "true", "false",
    }
)

PUNCTUATION = {
    "->": "ARROW",
    "{": "LBRACE", "}": "RBRACE",
    "(": "LPAREN", ")": "RPAREN",
    "[": "LBRACKET", "]": "RBRACKET",
    "<": "LT", ">": "GT",
    ";": "SEMI", ",": "COMMA", ".": "DOT",
    ":": "COLON", "*": "STAR", "=": "EQ", "&": "AMP",
}


class Tok(enum.Enum):
    IDENT = "identifier"
    KEYWORD = "keyword"
    INT = "integer literal"
    CHAR = "character literal"
    STRING = "string literal"
    PUNCT = "punctuation"
    OTHER = "character"
    EOF = "end of input"


@dataclass(frozen=True)
class Token:
    kind: Tok
    text: str
    start: int  # character offset into the source
    end: int
    line: int
    col: int
    end_line: int
    end_col: int

    def is_(self, text: str) -> bool:
        return self.text == text and self.kind in (Tok.KEYWORD, Tok.PUNCT)

    def describe(self) -> str:
        if self.kind is Tok.EOF:
            return "end of input"
        return repr(self.text)


class LexError(Exception):
    def __init__(self, code: str, message: str, line: int, col: int) -> None:
        super().__init__(message)
        self.code = code
        self.message = message
        self.line = line
        self.col = col


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _is_ident_part(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens, skipping whitespace and comments.

    Raises:
        LexError: code P002 for an unterminated block comment, P001 for an
            unterminated string or character literal.
    """
    tokens: list[Token] = []
    i = 0
    line, col = 1, 1
    n = len(text)

    def advance_to(j: int) -> None:
        nonlocal i, line, col
        while i < j:
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch in " \t\r\n\f":
            advance_to(i + 1)
            continue
        if text.startswith("//", i):
            j = text.find("\n", i)
            advance_to(n if j < 0 else j)
            continue
        if text.startswith("/*", i):
            j = text.find("*/", i + 2)
            if j < 0:
                raise LexError("P002", "unterminated block comment", line, col)
            advance_to(j + 2)
            continue

        start, sline, scol = i, line, col
        if _is_ident_start(ch):
            j = i + 1
            while j < n and _is_ident_part(text[j]):
                j += 1
            word = text[i:j]
            kind = Tok.KEYWORD if word in KEYWORDS else Tok.IDENT
        elif ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            kind = Tok.INT
        elif ch in "\"'":
            j = _scan_quoted(text, i)
            if j < 0:
                if ch == "'":
                    # A lone quote outside a character literal, e.g. in OCL text.
                    j, kind = i + 1, Tok.OTHER
                else:
                    raise LexError("P001", "unterminated string literal", line, col)
            else:
                kind = Tok.CHAR if ch == "'" else Tok.STRING
                if kind is Tok.CHAR and not _is_char_literal(text[i:j]):
                    j, kind = i + 1, Tok.OTHER
        elif text.startswith("->", i):
            j, kind = i + 2, Tok.PUNCT
        elif ch in PUNCTUATION:
            j, kind = i + 1, Tok.PUNCT
        else:
            j, kind = i + 1, Tok.OTHER
        advance_to(j)
        tokens.append(Token(kind, text[start:j], start, j, sline, scol, line, col))

    tokens.append(Token(Tok.EOF, "", n, n, line, col, line, col))
    return tokens


def _scan_quoted(text: str, i: int) -> int:
    """Return the offset just past the closing quote, or -1."""
    quote = text[i]
    j = i + 1
    while j < len(text):
        c = text[j]
        if c == "\\":
            j += 2
            continue
        if c == quote:
            return j + 1
        if c == "\n":
            return -1
        j += 1
    return -1


def _is_char_literal(lexeme: str) -> bool:
    body = lexeme[1:-1]
    if len(body) == 1 and body != "\\":
        return True
    return len(body) >= 2 and body[0] == "\\"


def token_span(file: str, first: Token, last: Token | None = None) -> Span:
    last = last or first
    return Span(file, first.line, first.col, last.end_line, last.end_col)
