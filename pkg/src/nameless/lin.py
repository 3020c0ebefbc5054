"""Typing for restricted terms: certificates are sorted lists of free indices.

A plain term is *restricted* when a list type can be inferred for it: an
index has the singleton list, an abstraction requires its body to use index
0 and decrements the rest, an application merges the two sides.  The merge
is partial, so duplicated use fails, and the head requirement rejects
unused binders.  A closed term is linear exactly when its list type is [].
"""

from __future__ import annotations

from functools import lru_cache
from typing import FrozenSet, List, Tuple

from .ltypes import (
    Derivation,
    LType,
    TypeFailure,
    Typing,
    decrement,
    ltype_text,
    merge,
)
from .terms import Abs, App, CapExceeded, Index, PlainTerm

ENUMERATION_CAP = 11


class AbsHeadMissing(TypeFailure):
    """Abstraction whose body never uses index 0."""

    def __init__(self, body_type: LType):
        self.body_type = body_type
        super().__init__(
            f"abstraction body never uses index 0 (body type {ltype_text(body_type)})"
        )


def _infer(t: PlainTerm) -> Derivation:
    if isinstance(t, Index):
        return Derivation("ind", t, (t.n,), ())
    if isinstance(t, Abs):
        body = _infer(t.body)
        if not body.ltype or body.ltype[0] != 0:
            raise AbsHeadMissing(body.ltype)
        # the tail is sorted, duplicate-free and above 0, so decrement is total
        return Derivation("abs", t, decrement(body.ltype[1:]), (body,))
    fun = _infer(t.fun)
    arg = _infer(t.arg)
    return Derivation("app", t, merge(fun.ltype, arg.ltype), (fun, arg))


def infer_lin(t: PlainTerm) -> Typing:
    """Infer the list type of a plain term, or raise a TypeFailure."""
    derivation = _infer(t)
    return Typing(t, derivation.ltype, derivation)


def is_lin(t: PlainTerm) -> bool:
    """True iff some list type can be inferred for t."""
    try:
        infer_lin(t)
    except TypeFailure:
        return False
    return True


def is_closed_linear_typed(t: PlainTerm) -> bool:
    """True iff t has list type []."""
    try:
        return infer_lin(t).ltype == ()
    except TypeFailure:
        return False


def _term_key(t: PlainTerm):
    if isinstance(t, Index):
        return (0, t.n)
    if isinstance(t, Abs):
        return (1, _term_key(t.body))
    return (2, _term_key(t.fun), _term_key(t.arg))


@lru_cache(maxsize=None)
def _gen(size: int, free: FrozenSet[int]) -> Tuple[PlainTerm, ...]:
    """All linear terms of exactly this size whose free indices are exactly free."""
    if size == 1:
        if len(free) == 1:
            return (Index(next(iter(free))),)
        return ()
    out: List[PlainTerm] = []
    body_free = frozenset(n + 1 for n in free) | {0}
    for body in _gen(size - 1, body_free):
        out.append(Abs(body))
    if size >= 3:
        items = sorted(free)
        for fun_size in range(1, size - 1):
            arg_size = size - 1 - fun_size
            for mask in range(1 << len(items)):
                fun_free = frozenset(
                    items[i] for i in range(len(items)) if mask >> i & 1
                )
                arg_free = free - fun_free
                for fun in _gen(fun_size, fun_free):
                    for arg in _gen(arg_size, arg_free):
                        out.append(App(fun, arg))
    return tuple(out)


def enumerate_closed_linear(max_size: int, cap: int = ENUMERATION_CAP) -> List[PlainTerm]:
    """All closed linear plain terms of size <= max_size, deterministic order."""
    if max_size > cap:
        raise CapExceeded(f"max_size {max_size} exceeds cap {cap}")
    terms: List[PlainTerm] = []
    for size in range(1, max_size + 1):
        terms.extend(sorted(_gen(size, frozenset()), key=_term_key))
    return terms
