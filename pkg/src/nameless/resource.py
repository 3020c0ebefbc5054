"""Resource calculus: explicit duplication and erasure over resource indices.

An occurrence is a resource index (n, path): de Bruijn depth n plus a 0/1
branch path recording which duplicator arms produced it.  dup (n,a) binds the
two clones (n,a0) and (n,a1) in its body and exposes (n,a); era (n,a)
declares (n,a) unused.  Well-formedness is exactly L-typeability: the type
lists the free resource indices, an abstraction consumes its (0,e) head, and
the twelve rewrite rules push duplicators in and pull erasers out without
ever changing the type.

Translations: read decorates a plain term with the minimal dup/era structure
(duplicating at the lowest application where both sides share an index,
always at path-extension points), readback erases the decorations, and
standardize is read after readback.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, List, Optional, Tuple, Union

from .lin import AbsHeadMissing
from .ltypes import (
    Derivation,
    LType,
    RIndex,
    TypeFailure,
    Typing,
    decrement,
    index_text,
    merge,
)
from .rewrite import node_children, node_rebuild, normalize_with, step_at
from .terms import (
    Abs,
    App,
    Index,
    ParseError,
    Path,
    PlainTerm,
    TokenStream,
    free_index_set,
    free_indices,
    tokenize,
)
from .upsilon import DEFAULT_FUEL, LinearityLost, OnStep, normalize_lin_pipeline


class ZeroDepthRemains(TypeFailure):
    """Abstraction body keeps a depth-0 index besides the consumed head."""

    def __init__(self, index: RIndex):
        self.index = index
        super().__init__(
            f"abstraction body still binds {index_text(index)} after its head"
        )


class DupChildrenMissing(TypeFailure):
    """A duplicator whose body does not free both clone indices."""

    def __init__(self, index: RIndex, missing: RIndex):
        self.index = index
        self.missing = missing
        super().__init__(
            f"duplicator {index_text(index)} misses child {index_text(missing)}"
        )


class NotWellFormed(Exception):
    """The term has no list type, so its free-index list is undefined."""


@dataclass(frozen=True, slots=True)
class RInd:
    ix: RIndex


@dataclass(frozen=True, slots=True)
class Era:
    ix: RIndex
    body: object


@dataclass(frozen=True, slots=True)
class Dup:
    ix: RIndex
    body: object


RTerm = Union[RInd, Abs, App, Era, Dup]

R_RULE_NAMES = (
    "Lambda_era",
    "Dup_lambda",
    "AppL_era",
    "AppR_era",
    "AppL_dup",
    "AppR_dup",
    "Era_era",
    "Dup_era_1",
    "Dup_era_0",
    "Dup_era_swap",
    "Dup_dup_1",
    "Dup_dup_swap",
)


@node_children.register(RInd)
def _(t) -> Tuple:
    return ()


@node_rebuild.register(RInd)
def _(t, kids: Tuple):
    return t


@node_children.register(Era)
def _(t) -> Tuple:
    return (t.body,)


@node_rebuild.register(Era)
def _(t, kids: Tuple):
    return Era(t.ix, kids[0])


@node_children.register(Dup)
def _(t) -> Tuple:
    return (t.body,)


@node_rebuild.register(Dup)
def _(t, kids: Tuple):
    return Dup(t.ix, kids[0])


# ---------------------------------------------------------------------------
# Typing

def _infer(t) -> Derivation:
    if isinstance(t, RInd):
        return Derivation("ind", t, (t.ix,), ())
    if isinstance(t, Abs):
        body = _infer(t.body)
        lt = body.ltype
        if not lt or lt[0] != RIndex(0, ""):
            raise AbsHeadMissing(lt)
        tail = lt[1:]
        for ix in tail:
            if ix.depth == 0:
                raise ZeroDepthRemains(ix)
        return Derivation("abs", t, decrement(tail), (body,))
    if isinstance(t, App):
        fun = _infer(t.fun)
        arg = _infer(t.arg)
        return Derivation("app", t, merge(fun.ltype, arg.ltype), (fun, arg))
    if isinstance(t, Era):
        body = _infer(t.body)
        return Derivation("era", t, merge((t.ix,), body.ltype), (body,))
    if isinstance(t, Dup):
        body = _infer(t.body)
        left = RIndex(t.ix.depth, t.ix.path + "0")
        right = RIndex(t.ix.depth, t.ix.path + "1")
        for child in (left, right):
            if child not in body.ltype:
                raise DupChildrenMissing(t.ix, child)
        rest = tuple(ix for ix in body.ltype if ix not in (left, right))
        return Derivation("dup", t, merge(rest, (t.ix,)), (body,))
    raise TypeError(f"not a resource term: {t!r}")


def infer_r(t: RTerm) -> Typing:
    """Infer the list type of free resource indices, or raise a TypeFailure."""
    derivation = _infer(t)
    return Typing(t, derivation.ltype, derivation)


def free_r_indices(t: RTerm) -> LType:
    """The inferred type, re-raised as NotWellFormed when inference fails."""
    try:
        return infer_r(t).ltype
    except TypeFailure as e:
        raise NotWellFormed(str(e)) from e


def is_linear_and_closed(t: RTerm) -> bool:
    try:
        return free_r_indices(t) == ()
    except NotWellFormed:
        return False


def _free_set(t) -> FrozenSet[RIndex]:
    """Free indices for rule guards; an untypeable subterm frees nothing."""
    try:
        return frozenset(infer_r(t).ltype)
    except TypeFailure:
        return frozenset()


# ---------------------------------------------------------------------------
# Replacement: rewrite every index (n, a g) with the matching (n, a) prefix
# to (m, b g).  Both depths climb under abstractions; era/dup annotations are
# rewritten without a depth shift at the node itself.

def _replace_ix(ix: RIndex, frm: RIndex, to: RIndex) -> RIndex:
    if ix.depth == frm.depth and ix.path.startswith(frm.path):
        return RIndex(to.depth, to.path + ix.path[len(frm.path):])
    return ix


def _deeper(ix: RIndex) -> RIndex:
    return RIndex(ix.depth + 1, ix.path)


def replace(t: RTerm, frm: RIndex, to: RIndex) -> RTerm:
    if isinstance(t, RInd):
        return RInd(_replace_ix(t.ix, frm, to))
    if isinstance(t, Abs):
        return Abs(replace(t.body, _deeper(frm), _deeper(to)))
    if isinstance(t, App):
        return App(replace(t.fun, frm, to), replace(t.arg, frm, to))
    if isinstance(t, Era):
        return Era(_replace_ix(t.ix, frm, to), replace(t.body, frm, to))
    if isinstance(t, Dup):
        return Dup(_replace_ix(t.ix, frm, to), replace(t.body, frm, to))
    raise TypeError(f"not a resource term: {t!r}")


# ---------------------------------------------------------------------------
# The twelve rules, tried in the fixed priority order below.  Guards make at
# most one fire per position on well-typed terms; priority settles the rest.

def match_r(t) -> Optional[Tuple[str, object]]:
    if isinstance(t, Abs) and isinstance(t.body, Era) and t.body.ix.depth >= 1:
        e = t.body
        return "Lambda_era", Era(RIndex(e.ix.depth - 1, e.ix.path), Abs(e.body))
    if isinstance(t, Dup) and isinstance(t.body, Abs):
        return "Dup_lambda", Abs(Dup(_deeper(t.ix), t.body.body))
    if isinstance(t, App) and isinstance(t.fun, Era):
        return "AppL_era", Era(t.fun.ix, App(t.fun.body, t.arg))
    if isinstance(t, App) and isinstance(t.arg, Era):
        return "AppR_era", Era(t.arg.ix, App(t.fun, t.arg.body))
    if isinstance(t, Dup) and isinstance(t.body, App):
        left = RIndex(t.ix.depth, t.ix.path + "0")
        right = RIndex(t.ix.depth, t.ix.path + "1")
        fun_free = _free_set(t.body.fun)
        if left in fun_free and right in fun_free:
            return "AppL_dup", App(Dup(t.ix, t.body.fun), t.body.arg)
        arg_free = _free_set(t.body.arg)
        if left in arg_free and right in arg_free:
            return "AppR_dup", App(t.body.fun, Dup(t.ix, t.body.arg))
    if isinstance(t, Era) and isinstance(t.body, Era) and t.ix.depth < t.body.ix.depth:
        return "Era_era", Era(t.body.ix, Era(t.ix, t.body.body))
    if isinstance(t, Dup) and isinstance(t.body, Era):
        n, a = t.ix.depth, t.ix.path
        e = t.body
        if e.ix == RIndex(n, a + "1"):
            return "Dup_era_1", replace(e.body, RIndex(n, a + "0"), t.ix)
        if e.ix == RIndex(n, a + "0"):
            return "Dup_era_0", replace(e.body, RIndex(n, a + "1"), t.ix)
        return "Dup_era_swap", Era(e.ix, Dup(t.ix, e.body))
    if isinstance(t, Dup) and isinstance(t.body, Dup):
        inner = t.body
        n, a = t.ix.depth, t.ix.path
        if inner.ix == RIndex(n, a + "1"):
            u = inner.body
            u = replace(u, RIndex(n, a + "0"), RIndex(n, a + "00"))
            u = replace(u, RIndex(n, a + "10"), RIndex(n, a + "01"))
            u = replace(u, RIndex(n, a + "11"), RIndex(n, a + "1"))
            return "Dup_dup_1", Dup(t.ix, Dup(RIndex(n, a + "0"), u))
        if t.ix.depth < inner.ix.depth:
            return "Dup_dup_swap", Dup(inner.ix, Dup(t.ix, inner.body))
    return None


def step_r(t: RTerm, path: Path) -> Tuple[RTerm, str]:
    return step_at(t, path, match_r)


def normalize_dup_era(
    t: RTerm, fuel: int = DEFAULT_FUEL, on_step: Optional[OnStep] = None
) -> Tuple[RTerm, int]:
    """Push duplicators in and pull erasers out until no rule applies.

    Requires a well-typed input; every step preserves the type.  Termination
    of this system has no proof here, so the fuel bound is mandatory.
    """
    infer_r(t)
    return normalize_with(t, match_r, fuel, on_step)


# ---------------------------------------------------------------------------
# Translations

def readback(t: RTerm) -> PlainTerm:
    """Erase duplicators, erasers, and branch paths."""
    if isinstance(t, RInd):
        return Index(t.ix.depth)
    if isinstance(t, Abs):
        return Abs(readback(t.body))
    if isinstance(t, App):
        return App(readback(t.fun), readback(t.arg))
    if isinstance(t, (Era, Dup)):
        return readback(t.body)
    raise TypeError(f"not a resource term: {t!r}")


def _cons_bit(t: RTerm, depth: int, bit: str) -> RTerm:
    """Prepend bit to the path of every construct referring to this binder."""
    if isinstance(t, RInd):
        if t.ix.depth == depth:
            return RInd(RIndex(depth, bit + t.ix.path))
        return t
    if isinstance(t, Abs):
        return Abs(_cons_bit(t.body, depth + 1, bit))
    if isinstance(t, App):
        return App(_cons_bit(t.fun, depth, bit), _cons_bit(t.arg, depth, bit))
    if isinstance(t, (Era, Dup)):
        ix = t.ix
        if ix.depth == depth:
            ix = RIndex(depth, bit + ix.path)
        return type(t)(ix, _cons_bit(t.body, depth, bit))
    raise TypeError(f"not a resource term: {t!r}")


def _peel_dups(t: RTerm) -> Tuple[List[RIndex], RTerm]:
    chain: List[RIndex] = []
    while isinstance(t, Dup):
        chain.append(t.ix)
        t = t.body
    return chain, t


def read(t: PlainTerm) -> RTerm:
    """Decorate a plain term with minimal duplication and erasure.

    Indices become path-less resource indices.  A binder that is never used
    gets an eraser right under its lambda.  At an application, each index
    free on both sides is split: occurrences on the left get bit 0 prepended,
    on the right bit 1, and one duplicator per shared index (ascending)
    wraps the application, above the duplicator chains hoisted from the two
    freshly split sides.
    """
    if isinstance(t, Index):
        return RInd(RIndex(t.n, ""))
    if isinstance(t, Abs):
        body = read(t.body)
        if 0 in free_index_set(t.body):
            return Abs(body)
        return Abs(Era(RIndex(0, ""), body))
    if isinstance(t, App):
        rfun, rarg = read(t.fun), read(t.arg)
        common = sorted(free_index_set(t.fun) & free_index_set(t.arg))
        for i in common:
            rfun = _cons_bit(rfun, i, "0")
            rarg = _cons_bit(rarg, i, "1")
        fun_chain, fun_core = _peel_dups(rfun)
        arg_chain, arg_core = _peel_dups(rarg)
        out: RTerm = App(fun_core, arg_core)
        chain = [RIndex(i, "") for i in common] + fun_chain + arg_chain
        for ix in reversed(chain):
            out = Dup(ix, out)
        return out
    raise TypeError(f"not a plain term: {t!r}")


def standardize(t: RTerm) -> RTerm:
    return read(readback(t))


def beta_r(
    t: RTerm, fuel: int = DEFAULT_FUEL, on_step: Optional[OnStep] = None
) -> RTerm:
    """Normalize a linear closed resource term through the plain pipeline."""
    if not is_linear_and_closed(t):
        raise ValueError("beta_r requires a linear closed term")
    result = read(normalize_lin_pipeline(readback(t), fuel, on_step))
    out, _steps = normalize_dup_era(result, fuel, on_step)
    if not is_linear_and_closed(out):
        raise LinearityLost("beta_r output is no longer linear and closed")
    return out


# ---------------------------------------------------------------------------
# Representatives: every way to decorate a closed plain term binder-by-binder
# with a full duplicator tree directly under each lambda.

@lru_cache(maxsize=None)
def _dup_shapes(k: int) -> Tuple[Tuple[Tuple[str, ...], Tuple[str, ...]], ...]:
    """(leaf paths, internal-node paths) of full binary trees with k leaves."""
    if k == 1:
        return ((("",), ()),)
    out = []
    for left_count in range(1, k):
        for left_leaves, left_nodes in _dup_shapes(left_count):
            for right_leaves, right_nodes in _dup_shapes(k - left_count):
                leaves = tuple("0" + p for p in left_leaves) + tuple(
                    "1" + p for p in right_leaves
                )
                nodes = (
                    ("",)
                    + tuple("0" + p for p in left_nodes)
                    + tuple("1" + p for p in right_nodes)
                )
                out.append((leaves, nodes))
    return tuple(out)


def _occurrences(t, depth: int, prefix: Path, out: List[Path]) -> None:
    if isinstance(t, RInd):
        if t.ix.depth == depth and t.ix.path == "":
            out.append(prefix)
    elif isinstance(t, Abs):
        _occurrences(t.body, depth + 1, prefix + (0,), out)
    elif isinstance(t, App):
        _occurrences(t.fun, depth, prefix + (0,), out)
        _occurrences(t.arg, depth, prefix + (1,), out)
    elif isinstance(t, (Era, Dup)):
        _occurrences(t.body, depth, prefix + (0,), out)


def _set_leaf(t, path: Path, leaf: str):
    if not path:
        return RInd(RIndex(t.ix.depth, leaf))
    kids = list(node_children(t))
    kids[path[0]] = _set_leaf(kids[path[0]], path[1:], leaf)
    return node_rebuild(t, tuple(kids))


def _variants(t: PlainTerm) -> List[RTerm]:
    if isinstance(t, Index):
        return [RInd(RIndex(t.n, ""))]
    if isinstance(t, App):
        return [
            App(fun, arg)
            for fun in _variants(t.fun)
            for arg in _variants(t.arg)
        ]
    out: List[RTerm] = []
    for body in _variants(t.body):
        occ: List[Path] = []
        _occurrences(body, 0, (), occ)
        if not occ:
            out.append(Abs(Era(RIndex(0, ""), body)))
            continue
        for leaves, internal in _dup_shapes(len(occ)):
            for assigned in itertools.permutations(leaves):
                decorated = body
                for position, leaf in zip(occ, assigned):
                    decorated = _set_leaf(decorated, position, leaf)
                for p in sorted(internal, reverse=True):
                    decorated = Dup(RIndex(0, p), decorated)
                out.append(Abs(decorated))
    return out


def enumerate_representatives(t: PlainTerm) -> List[RTerm]:
    """All decorations of a closed plain term, deterministic order."""
    if free_indices(t):
        raise ValueError("representatives are enumerated for closed terms only")
    return list(dict.fromkeys(_variants(t)))


# ---------------------------------------------------------------------------
# Concrete syntax.  era and dup reach as far right as possible:
# "dup 0 2 0_0 (1 0_1)" is dup 0 applied to the whole application.

def _parse_rindex(ts: TokenStream) -> RIndex:
    num = ts.expect("NUM", "resource index")
    if ts.peek().kind != "UNDER":
        return RIndex(int(num.text), "")
    ts.next()
    bits = ts.expect("NUM", "bit string")
    if bits.text.strip("01"):
        raise ParseError(bits.pos, ("bit string of 0/1",), bits.text)
    return RIndex(int(num.text), bits.text)


_ATOM_STARTS = ("NUM", "LAM", "LP", "IDENT")


def _parse_term(ts: TokenStream) -> RTerm:
    t = _parse_atom(ts)
    while ts.peek().kind in _ATOM_STARTS:
        t = App(t, _parse_atom(ts))
    return t


def _parse_atom(ts: TokenStream) -> RTerm:
    tok = ts.peek()
    if tok.kind == "NUM":
        return RInd(_parse_rindex(ts))
    if tok.kind == "LAM":
        ts.next()
        return Abs(_parse_term(ts))
    if tok.kind == "LP":
        ts.next()
        t = _parse_term(ts)
        ts.expect("RP", "')'")
        return t
    if tok.kind == "IDENT":
        if tok.text == "era":
            ts.next()
            return Era(_parse_rindex(ts), _parse_term(ts))
        if tok.text == "dup":
            ts.next()
            return Dup(_parse_rindex(ts), _parse_term(ts))
    ts.fail(("resource index", "'\\'", "'('", "'era'", "'dup'"))


def parse_r(src: str) -> RTerm:
    ts = TokenStream(tokenize(src))
    t = _parse_term(ts)
    ts.expect("END", "end of input")
    return t


def print_r(t: RTerm) -> str:
    if isinstance(t, RInd):
        return str(t.ix)
    if isinstance(t, Abs):
        body = print_r(t.body)
        return "\\" + (f"({body})" if isinstance(t.body, App) else body)
    if isinstance(t, App):
        fun = print_r(t.fun)
        if isinstance(t.fun, (Abs, Era, Dup)):
            fun = f"({fun})"
        arg = print_r(t.arg)
        if isinstance(t.arg, (App, Abs, Era, Dup)):
            arg = f"({arg})"
        return f"{fun} {arg}"
    if isinstance(t, Era):
        return f"era {t.ix} {print_r(t.body)}"
    if isinstance(t, Dup):
        return f"dup {t.ix} {print_r(t.body)}"
    raise TypeError(f"not a resource term: {t!r}")


# ---------------------------------------------------------------------------
# The zoo of closed linear combinators used as a fixed test corpus.

IDENTITY_R: RTerm = parse_r(r"\0")
K_R: RTerm = parse_r(r"\\era 0 1")
TRUE_R: RTerm = K_R
FALSE_R: RTerm = parse_r(r"\era 0 \0")
S_R: RTerm = parse_r(r"\\\dup 0 (2 0_0 (1 0_1))")
FIX_R: RTerm = parse_r(
    r"\dup 0 ((\1_0 dup 0 (0_0 0_1)) (\1_1 dup 0 (0_0 0_1)))"
)
CHURCH_FIVE_R: RTerm = parse_r(
    r"\\dup 1 dup 1_0 dup 1_00 dup 1_000 (1_0000 (1_0001 (1_001 (1_01 (1_1 0)))))"
)
# the same numeral assembled as 3+2, 2+3, and 3+1+1
CHURCH_FIVE_ALT_R: Tuple[RTerm, ...] = (
    parse_r(r"\\dup 1 dup 1_0 dup 1_00 (1_000 (1_001 (1_01 (dup 1_1 (1_10 (1_11 0))))))"),
    parse_r(r"\\dup 1 dup 1_0 (1_00 (1_01 (dup 1_1 dup 1_10 (1_100 (1_101 (1_11 0))))))"),
    parse_r(r"\\dup 1 dup 1_0 dup 1_00 (1_000 (dup 1_001 (1_0010 (1_0011 (1_01 (1_1 0))))))"),
)

BESTIARY: Tuple[Tuple[str, RTerm], ...] = (
    ("identity", IDENTITY_R),
    ("true", TRUE_R),
    ("false", FALSE_R),
    ("compose-share", S_R),
    ("fixpoint", FIX_R),
    ("five", CHURCH_FIVE_R),
    ("five-as-3-plus-2", CHURCH_FIVE_ALT_R[0]),
    ("five-as-2-plus-3", CHURCH_FIVE_ALT_R[1]),
    ("five-as-3-plus-1-plus-1", CHURCH_FIVE_ALT_R[2]),
)
