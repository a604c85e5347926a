"""Java tokenizer with identifier/literal normalization.

The lexer is standalone and error tolerant: it never raises on malformed
input, it only records warnings.  Normalization erases the spelling of
identifiers and literals so that two structurally identical snippets map to
the same symbol sequence regardless of renamings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional


class TokenKind(Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    NUMBER = "number-literal"
    STRING = "string-literal"
    CHAR = "char-literal"
    BOOL_NULL = "boolean-null-literal"
    OPERATOR = "operator"
    PUNCTUATION = "punctuation"


_LITERAL_KINDS = frozenset(
    {TokenKind.NUMBER, TokenKind.STRING, TokenKind.CHAR, TokenKind.BOOL_NULL}
)

ID_MARKER = "$id"
LIT_MARKER = "$lit"

# Reserved words of Java 17 (JLS 3.9).  Contextual keywords (var, record,
# yield, sealed, permits, ...) lex as identifiers: both snippets of a pair
# are lexed by the same rules, so the distinction cannot skew matching.
KEYWORDS = frozenset(
    """
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package
    private protected public return short static strictfp super switch
    synchronized this throw throws transient try void volatile while _
    """.split()
)

_BOOL_NULL_WORDS = frozenset({"true", "false", "null"})

# Multi-character separators are listed with the operators so one
# longest-first table drives maximal munch.
_PUNCT_TEXTS = frozenset({"(", ")", "{", "}", "[", "]", ";", ",", ".", "@", "::", "..."})

_OPERATOR_TABLE = sorted(
    [
        ">>>=", "<<=", ">>=", ">>>", "...",
        "->", "::", "==", ">=", "<=", "!=", "&&", "||", "++", "--",
        "+=", "-=", "*=", "/=", "&=", "|=", "^=", "%=", "<<", ">>",
        "=", ">", "<", "!", "~", "?", ":", "+", "-", "*", "/", "&",
        "|", "^", "%", "(", ")", "{", "}", "[", "]", ";", ",", ".", "@",
    ],
    key=len,
    reverse=True,
)

_NUMBER_RE = re.compile(
    r"""
      0[xX][0-9a-fA-F_]+(?:\.[0-9a-fA-F_]*)?(?:[pP][+-]?[0-9_]+)?[lLfFdD]?
    | 0[bB][01_]+[lL]?
    | (?:\d[\d_]*)?\.\d[\d_]*(?:[eE][+-]?[\d_]+)?[fFdD]?
    | \d[\d_]*\.(?:\d[\d_]*)?(?:[eE][+-]?[\d_]+)?[fFdD]?
    | \d[\d_]*(?:[eE][+-]?[\d_]+)?[lLfFdD]?
    """,
    re.VERBOSE,
)

_WHITESPACE = " \t\r\n\f\x0b"


@dataclass(frozen=True, slots=True)
class Token:
    """One lexical unit with its 1-based source position."""

    kind: TokenKind
    text: str
    line: int
    column: int


def _is_ident_start(ch: str) -> bool:
    return ch == "_" or ch == "$" or ch.isalpha()


def _is_ident_part(ch: str) -> bool:
    return ch == "_" or ch == "$" or ch.isalnum()


def tokenize(source_text: str, warnings: Optional[list[str]] = None) -> list[Token]:
    """Lex Java source into tokens, skipping comments and whitespace.

    Unterminated strings, chars and block comments at end of file lex the
    remainder as a single literal (or skip region) and append a message to
    ``warnings`` when a list is given.  Unrecognized characters are skipped
    with a warning.
    """
    tokens: list[Token] = []
    text = source_text
    n = len(text)
    i = 0
    line = 1
    col = 1

    def advance_to(j: int) -> None:
        nonlocal i, line, col
        chunk = text[i:j]
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        i = j

    def warn(message: str) -> None:
        if warnings is not None:
            warnings.append(f"line {line}: {message}")

    def emit(kind: TokenKind, j: int) -> None:
        tokens.append(Token(kind, text[i:j], line, col))
        advance_to(j)

    while i < n:
        ch = text[i]

        if ch in _WHITESPACE:
            j = i + 1
            while j < n and text[j] in _WHITESPACE:
                j += 1
            advance_to(j)
            continue

        if text.startswith("//", i):
            j = text.find("\n", i)
            advance_to(n if j < 0 else j)
            continue

        if text.startswith("/*", i):
            j = text.find("*/", i + 2)
            if j < 0:
                warn("unterminated block comment")
                advance_to(n)
            else:
                advance_to(j + 2)
            continue

        if text.startswith('"""', i):
            j = text.find('"""', i + 3)
            if j < 0:
                warn("unterminated text block")
                emit(TokenKind.STRING, n)
            else:
                emit(TokenKind.STRING, j + 3)
            continue

        if ch == '"' or ch == "'":
            quote = ch
            j = i + 1
            while j < n:
                if text[j] == "\\" and j + 1 < n:
                    j += 2
                    continue
                if text[j] == quote:
                    j += 1
                    break
                j += 1
            else:
                warn(f"unterminated {'string' if quote == chr(34) else 'char'} literal")
            kind = TokenKind.STRING if quote == '"' else TokenKind.CHAR
            emit(kind, j)
            continue

        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            m = _NUMBER_RE.match(text, i)
            emit(TokenKind.NUMBER, m.end())
            continue

        if _is_ident_start(ch):
            j = i + 1
            while j < n and _is_ident_part(text[j]):
                j += 1
            word = text[i:j]
            if word in KEYWORDS:
                kind = TokenKind.KEYWORD
            elif word in _BOOL_NULL_WORDS:
                kind = TokenKind.BOOL_NULL
            else:
                kind = TokenKind.IDENTIFIER
            emit(kind, j)
            continue

        for op in _OPERATOR_TABLE:
            if text.startswith(op, i):
                kind = TokenKind.PUNCTUATION if op in _PUNCT_TEXTS else TokenKind.OPERATOR
                emit(kind, i + len(op))
                break
        else:
            warn(f"skipped unexpected character {ch!r}")
            advance_to(i + 1)

    return tokens


def normalize(tokens: list[Token]) -> list[str]:
    """Map tokens to their type-2 symbols.

    Identifiers become ``$id``, every literal kind becomes ``$lit``, all
    other kinds keep their text verbatim.  Length preserving.
    """
    out = []
    for tok in tokens:
        if tok.kind is TokenKind.IDENTIFIER:
            out.append(ID_MARKER)
        elif tok.kind in _LITERAL_KINDS:
            out.append(LIT_MARKER)
        else:
            out.append(tok.text)
    return out
