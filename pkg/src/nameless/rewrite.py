"""Generic tree walking and the leftmost-outermost rewrite engine.

Paths address subterms as constructor-argument index sequences from the
root.  Each syntax module registers its node kinds with node_children and
node_rebuild; the engine itself only knows how to walk, match, and splice.
A matcher maps a node to (rule name, replacement) or None; the engine fires
the first match in pre-order, which is the leftmost-outermost strategy.
"""

from __future__ import annotations

from functools import singledispatch
from typing import Callable, Iterator, Optional, Tuple

from .terms import Abs, App, FuelExhausted, Index, NoRedex, Path, path_text


@singledispatch
def node_children(t) -> Tuple:
    raise TypeError(f"not a term node: {t!r}")


@singledispatch
def node_rebuild(t, kids: Tuple):
    raise TypeError(f"not a term node: {t!r}")


@node_children.register
def _(t: Index) -> Tuple:
    return ()


@node_rebuild.register
def _(t: Index, kids: Tuple):
    return t


@node_children.register
def _(t: Abs) -> Tuple:
    return (t.body,)


@node_rebuild.register
def _(t: Abs, kids: Tuple):
    return Abs(kids[0])


@node_children.register
def _(t: App) -> Tuple:
    return (t.fun, t.arg)


@node_rebuild.register
def _(t: App, kids: Tuple):
    return App(kids[0], kids[1])


def subterm_at(t, path: Path):
    for k in path:
        kids = node_children(t)
        if k >= len(kids):
            raise ValueError(f"path {path_text(path)} does not address a subterm")
        t = kids[k]
    return t


Matcher = Callable[[object], Optional[Tuple[str, object]]]


def find_first_redex(t, match: Matcher) -> Optional[Tuple[Path, str]]:
    """Leftmost-outermost: the node itself, then children left to right."""
    m = match(t)
    if m is not None:
        return (), m[0]
    for k, child in enumerate(node_children(t)):
        found = find_first_redex(child, match)
        if found is not None:
            return (k,) + found[0], found[1]
    return None


def iter_redexes(t, match: Matcher, prefix: Path = ()) -> Iterator[Tuple[Path, str]]:
    m = match(t)
    if m is not None:
        yield prefix, m[0]
    for k, child in enumerate(node_children(t)):
        yield from iter_redexes(child, match, prefix + (k,))


def step_at(t, path: Path, match: Matcher) -> Tuple[object, str]:
    if not path:
        m = match(t)
        if m is None:
            raise NoRedex(f"no rule matches at {path_text(path)}")
        rule, out = m
        return out, rule
    kids = list(node_children(t))
    if path[0] >= len(kids):
        raise ValueError(f"path {path_text(path)} does not address a subterm")
    kids[path[0]], rule = step_at(kids[path[0]], path[1:], match)
    return node_rebuild(t, tuple(kids)), rule


OnStep = Callable[[int, str, Path, object], None]


def normalize_with(
    t, match: Matcher, fuel: int, on_step: Optional[OnStep] = None
) -> Tuple[object, int]:
    """Fire leftmost-outermost redexes until none remain; count the steps."""
    steps = 0
    while True:
        found = find_first_redex(t, match)
        if found is None:
            return t, steps
        if steps >= fuel:
            raise FuelExhausted(steps)
        path, _ = found
        t, rule = step_at(t, path, match)
        steps += 1
        if on_step is not None:
            on_step(steps, rule, path, t)
