"""Plain de Bruijn terms: syntax, structural oracles, shared parsing machinery.

A plain term is an index, an abstraction, or an application.  Indices start
at 0 and count the binders crossed on the way up to the binding lambda.  The
structural oracles here (free indices, occurrence counts, closed-linearity)
are deliberately independent of every type system in the package; the typing
modules are validated against them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Tuple, Union


class ParseError(Exception):
    """Input text does not conform to the grammar.

    offset is a byte offset into the UTF-8 encoding of the source.
    """

    def __init__(self, offset: int, expected: Tuple[str, ...], found: str):
        self.offset = offset
        self.expected = tuple(expected)
        self.found = found
        want = ", ".join(self.expected)
        super().__init__(f"at byte {offset}: expected {want}, found {found}")


class NoRedex(Exception):
    """No rewrite rule matches at the requested position."""


class FuelExhausted(Exception):
    """Normalization ran out of fuel before reaching a normal form."""

    def __init__(self, steps: int):
        self.steps = steps
        super().__init__(f"fuel exhausted after {steps} steps")


class CapExceeded(Exception):
    """An enumeration bound beyond the configured cap was requested."""


@dataclass(frozen=True, slots=True)
class Index:
    n: int


@dataclass(frozen=True, slots=True)
class Abs:
    body: object


@dataclass(frozen=True, slots=True)
class App:
    fun: object
    arg: object


PlainTerm = Union[Index, Abs, App]

Path = Tuple[int, ...]


def term_size(t) -> int:
    """Number of AST nodes."""
    if isinstance(t, Index):
        return 1
    if isinstance(t, Abs):
        return 1 + term_size(t.body)
    return 1 + term_size(t.fun) + term_size(t.arg)


@dataclass(frozen=True, slots=True)
class OccurrenceProfile:
    """Occurrences bound by each lambda (in pre-order) plus the free multiset."""

    binder_counts: Tuple[int, ...]
    free: Tuple[int, ...]


def occurrence_profile(t: PlainTerm) -> OccurrenceProfile:
    binder_counts: List[int] = []
    free: List[int] = []

    def go(t, stack):
        if isinstance(t, Index):
            if t.n < len(stack):
                binder_counts[stack[-1 - t.n]] += 1
            else:
                free.append(t.n - len(stack))
        elif isinstance(t, Abs):
            binder_counts.append(0)
            go(t.body, stack + [len(binder_counts) - 1])
        else:
            go(t.fun, stack)
            go(t.arg, stack)

    go(t, [])
    return OccurrenceProfile(tuple(binder_counts), tuple(sorted(free)))


def free_indices(t: PlainTerm) -> Tuple[int, ...]:
    """Sorted multiset of free indices, adjusted to top-level depth."""
    return occurrence_profile(t).free


def free_index_set(t: PlainTerm) -> frozenset:
    return frozenset(free_indices(t))


def is_closed_linear_structural(t: PlainTerm) -> bool:
    """True iff no free index and every binder binds exactly one occurrence."""
    profile = occurrence_profile(t)
    return not profile.free and all(c == 1 for c in profile.binder_counts)


# ---------------------------------------------------------------------------
# Tokens shared by the three concrete grammars

_PUNCT = {
    "(": "LP",
    ")": "RP",
    "{": "LB",
    "}": "RB",
    "[": "LK",
    "]": "RK",
    ",": "COMMA",
    "!": "BANG",
    "/": "SLASH",
    "_": "UNDER",
}


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    pos: int  # byte offset


def tokenize(src: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    i = 0
    n = len(src)
    while i < n:
        ch = src[i]
        w = len(ch.encode("utf-8"))
        if ch.isspace():
            i += 1
            pos += w
            continue
        if ch in ("\\", "λ"):
            tokens.append(Token("LAM", ch, pos))
            i += 1
            pos += w
        elif ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            tokens.append(Token("NUM", src[i:j], pos))
            pos += j - i
            i = j
        elif ch.isalpha():
            j = i
            while j < n and src[j].isalpha():
                j += 1
            tokens.append(Token("IDENT", src[i:j], pos))
            pos += j - i
            i = j
        elif ch == "^":
            if i + 1 < n and src[i + 1] == "^":
                tokens.append(Token("DCARET", "^^", pos))
                i += 2
                pos += 2
            else:
                tokens.append(Token("CARET", "^", pos))
                i += 1
                pos += 1
        elif ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, pos))
            i += 1
            pos += w
        else:
            raise ParseError(pos, ("token",), repr(ch))
    tokens.append(Token("END", "", pos))
    return tokens


class TokenStream:
    """Cursor over a token list with uniform error reporting."""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(tok.pos, (what,), tok.text or "end of input")
        return self.next()

    def fail(self, expected: Tuple[str, ...]):
        tok = self.peek()
        raise ParseError(tok.pos, expected, tok.text or "end of input")


# ---------------------------------------------------------------------------
# Plain grammar:  term := app ; app := atom+ ; atom := NAT | "\" term | "(" term ")"

_ATOM_STARTS = ("NUM", "LAM", "LP")


def _parse_plain_term(ts: TokenStream) -> PlainTerm:
    term = _parse_plain_atom(ts)
    while ts.peek().kind in _ATOM_STARTS:
        term = App(term, _parse_plain_atom(ts))
    return term


def _parse_plain_atom(ts: TokenStream) -> PlainTerm:
    tok = ts.peek()
    if tok.kind == "NUM":
        ts.next()
        return Index(int(tok.text))
    if tok.kind == "LAM":
        ts.next()
        return Abs(_parse_plain_term(ts))
    if tok.kind == "LP":
        ts.next()
        term = _parse_plain_term(ts)
        ts.expect("RP", "')'")
        return term
    ts.fail(("index", "'\\'", "'('"))


def parse_plain(src: str) -> PlainTerm:
    ts = TokenStream(tokenize(src))
    term = _parse_plain_term(ts)
    ts.expect("END", "end of input")
    return term


def print_plain(t: PlainTerm) -> str:
    if isinstance(t, Index):
        return str(t.n)
    if isinstance(t, Abs):
        body = print_plain(t.body)
        if isinstance(t.body, App):
            body = f"({body})"
        return "\\" + body
    fun = print_plain(t.fun)
    if isinstance(t.fun, Abs):
        fun = f"({fun})"
    arg = print_plain(t.arg)
    if isinstance(t.arg, (App, Abs)):
        arg = f"({arg})"
    return f"{fun} {arg}"


def path_text(path: Path) -> str:
    """Trace display of a position: child indices from the root, "-" for it."""
    return ".".join(str(i) for i in path) if path else "-"
