"""Concrete and abstract syntax: lexer, parser, and pretty-printer."""

from montiarc.syntax.parser import ParseError, parse_compilation_unit

__all__ = ["ParseError", "parse_compilation_unit"]
