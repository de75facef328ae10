"""Tiny predicate language over document metadata.

Grammar: ``expr := term (|| term)*``, ``term := factor (&& factor)*``,
``factor := !factor | (expr) | field==value | field!=value``.
Example: ``(doc_type==book && genre==nonfiction) || doc_type==newspaper``.
"""

import re

from .errors import DataError

__all__ = ["parse_predicate", "PREDICATE_FIELDS"]

PREDICATE_FIELDS = {
    "source",
    "language",
    "doc_type",
    "genre",
    "original_language",
    "segment",
}

_TOKEN_RE = re.compile(
    r"\s*(\(|\)|&&|\|\||==|!=|!|[A-Za-z0-9_\-]+|\"[^\"]*\")"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise DataError(f"unexpected character in predicate: {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise DataError(
                f"malformed predicate: expected {expected or 'token'}, got {tok!r}"
            )
        self.pos += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek() == "||":
            self.take()
            rhs = self.term()
            node = _or(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek() == "&&":
            self.take()
            rhs = self.factor()
            node = _and(node, rhs)
        return node

    def factor(self):
        tok = self.peek()
        if tok == "!":
            self.take()
            inner = self.factor()
            return lambda doc: not inner(doc)
        if tok == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        field = self.take()
        if field not in PREDICATE_FIELDS:
            raise DataError(f"unknown field in predicate: {field!r}")
        op = self.take()
        if op not in ("==", "!="):
            raise DataError(f"malformed predicate: expected == or !=, got {op!r}")
        value = self.take().strip('"')
        if op == "==":
            return lambda doc: getattr(doc, field) == value
        return lambda doc: getattr(doc, field) != value


def _and(a, b):
    return lambda doc: a(doc) and b(doc)


def _or(a, b):
    return lambda doc: a(doc) or b(doc)


def parse_predicate(text):
    """Compile a predicate string into a Document -> bool callable."""
    tokens = _tokenize(text)
    if not tokens:
        raise DataError("empty predicate")
    parser = _Parser(tokens)
    node = parser.expr()
    if parser.peek() is not None:
        raise DataError(f"trailing tokens in predicate: {parser.tokens[parser.pos:]}")
    return node
