"""Explicit-substitution calculus: raw closures, abbreviated forms, typing.

Substitution is term syntax here, not a meta-operation.  The raw system has
closures t[s] with s one of: slash (replace index 0), lift (protect one
binder), shift (bump every index).  Eight rewrite rules push closures to the
indices.  Every substitution is lift^k applied to a slash or a shift, which
gives the abbreviated syntax: t ^ k (an updater) and t {u, k} (a delayed
substitution).  Twelve rules rewrite the abbreviated forms directly, and the
list-type system of the restricted calculus extends to them.

Normalization is leftmost-outermost (first match in pre-order); linear terms
are strongly normalizing, so the strategy only fixes the trace, not the
result.  The plain-term normalizer runs raw: embed, rewrite to normal form,
project back, and re-check that the result is typed [].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .lin import AbsHeadMissing, infer_lin
from .ltypes import (
    AtLeast,
    Derivation,
    GreaterThan,
    LessThan,
    LType,
    TypeFailure,
    Typing,
    decrement,
    filter_ltype,
    increment,
    ltype_text,
    merge,
)
from .rewrite import (
    Matcher,
    OnStep,
    find_first_redex,
    iter_redexes,
    node_children,
    node_rebuild,
    normalize_with,
    step_at,
    subterm_at,
)
from .terms import (
    Abs,
    App,
    FuelExhausted,
    Index,
    NoRedex,
    Path,
    PlainTerm,
    TokenStream,
    path_text,
    tokenize,
)

DEFAULT_FUEL = 10_000


class ClosureRemains(Exception):
    """A normal form still contains substitution syntax."""


class LinearityLost(Exception):
    """Pipeline output is no longer typed []; forbidden by preservation."""


class PreservationViolation(Exception):
    """A rewrite step changed the inferred list type; steps must preserve it."""

    def __init__(self, rule: str, path: Path, before: LType, after: LType):
        self.rule = rule
        self.path = path
        self.before = before
        self.after = after
        super().__init__(
            f"rule {rule} at {path_text(path)} changed type "
            f"{ltype_text(before)} to {ltype_text(after)}"
        )


@dataclass(frozen=True, slots=True)
class Upd:
    """t ^ i: shift the indices of t that are at least i."""

    body: object
    i: int


@dataclass(frozen=True, slots=True)
class Sub:
    """t {u, i}: substitute u for index i inside t."""

    body: object
    arg: object
    i: int


@dataclass(frozen=True, slots=True)
class Closure:
    body: object
    subst: object


@dataclass(frozen=True, slots=True)
class Slash:
    term: object


@dataclass(frozen=True, slots=True)
class Lift:
    subst: object


@dataclass(frozen=True, slots=True)
class Shift:
    pass


SHIFT = Shift()

RawSubst = Union[Slash, Lift, Shift]
RawUpsilonTerm = Union[Index, Abs, App, Closure]
UpsilonTerm = Union[Index, Abs, App, Upd, Sub]

RAW_RULE_NAMES = (
    "B", "App", "Lambda", "FVar", "RVar", "FVarLift", "RVarLift", "VarShift",
)
IN_RULE_NAMES = (
    "B_in",
    "App_upd", "App_sub",
    "Lambda_upd", "Lambda_sub",
    "FVar_sub", "RVar_sub", "FVarLift_sub", "RVarLift_sub",
    "FVarLift_upd", "RVarLift_upd", "VarShift_upd",
)


# ---------------------------------------------------------------------------
# Register the substitution nodes with the shared walker.

@node_children.register(Upd)
def _(t) -> Tuple:
    return (t.body,)


@node_rebuild.register(Upd)
def _(t, kids: Tuple):
    return Upd(kids[0], t.i)


@node_children.register(Sub)
def _(t) -> Tuple:
    return (t.body, t.arg)


@node_rebuild.register(Sub)
def _(t, kids: Tuple):
    return Sub(kids[0], kids[1], t.i)


@node_children.register(Closure)
def _(t) -> Tuple:
    return (t.body, t.subst)


@node_rebuild.register(Closure)
def _(t, kids: Tuple):
    return Closure(kids[0], kids[1])


@node_children.register(Slash)
def _(t) -> Tuple:
    return (t.term,)


@node_rebuild.register(Slash)
def _(t, kids: Tuple):
    return Slash(kids[0])


@node_children.register(Lift)
def _(t) -> Tuple:
    return (t.subst,)


@node_rebuild.register(Lift)
def _(t, kids: Tuple):
    return Lift(kids[0])


@node_children.register(Shift)
def _(t) -> Tuple:
    return ()


@node_rebuild.register(Shift)
def _(t, kids: Tuple):
    return t


def match_raw(t) -> Optional[Tuple[str, object]]:
    if isinstance(t, App) and isinstance(t.fun, Abs):
        return "B", Closure(t.fun.body, Slash(t.arg))
    if isinstance(t, Closure):
        b, s = t.body, t.subst
        if isinstance(b, App):
            return "App", App(Closure(b.fun, s), Closure(b.arg, s))
        if isinstance(b, Abs):
            return "Lambda", Abs(Closure(b.body, Lift(s)))
        if isinstance(b, Index):
            if isinstance(s, Slash):
                if b.n == 0:
                    return "FVar", s.term
                return "RVar", Index(b.n - 1)
            if isinstance(s, Lift):
                if b.n == 0:
                    return "FVarLift", b
                return "RVarLift", Closure(Closure(Index(b.n - 1), s.subst), SHIFT)
            return "VarShift", Index(b.n + 1)
    return None


def match_in(t) -> Optional[Tuple[str, object]]:
    if isinstance(t, App) and isinstance(t.fun, Abs):
        return "B_in", Sub(t.fun.body, t.arg, 0)
    if isinstance(t, Upd):
        b, i = t.body, t.i
        if isinstance(b, App):
            return "App_upd", App(Upd(b.fun, i), Upd(b.arg, i))
        if isinstance(b, Abs):
            return "Lambda_upd", Abs(Upd(b.body, i + 1))
        if isinstance(b, Index):
            if i == 0:
                return "VarShift_upd", Index(b.n + 1)
            if b.n == 0:
                return "FVarLift_upd", b
            return "RVarLift_upd", Upd(Upd(Index(b.n - 1), i - 1), 0)
    if isinstance(t, Sub):
        b, u, i = t.body, t.arg, t.i
        if isinstance(b, App):
            return "App_sub", App(Sub(b.fun, u, i), Sub(b.arg, u, i))
        if isinstance(b, Abs):
            return "Lambda_sub", Abs(Sub(b.body, u, i + 1))
        if isinstance(b, Index):
            if i == 0:
                if b.n == 0:
                    return "FVar_sub", u
                return "RVar_sub", Index(b.n - 1)
            if b.n == 0:
                return "FVarLift_sub", b
            return "RVarLift_sub", Upd(Sub(Index(b.n - 1), u, i - 1), 0)
    return None


def step_raw(t: RawUpsilonTerm, path: Path) -> Tuple[RawUpsilonTerm, str]:
    return step_at(t, path, match_raw)


def step_in(t: UpsilonTerm, path: Path) -> Tuple[UpsilonTerm, str]:
    return step_at(t, path, match_in)


# ---------------------------------------------------------------------------
# Syntax conversions.  Raw and abbreviated forms are two spellings of one
# language: lift^k(shift) is ^k, lift^k(u/) is {u, k}.

def _lift_n(s: RawSubst, i: int) -> RawSubst:
    for _ in range(i):
        s = Lift(s)
    return s


def raw_form(t) -> RawUpsilonTerm:
    """Spell every abbreviated node as a closure."""
    if isinstance(t, Index):
        return t
    if isinstance(t, Abs):
        return Abs(raw_form(t.body))
    if isinstance(t, App):
        return App(raw_form(t.fun), raw_form(t.arg))
    if isinstance(t, Closure):
        return Closure(raw_form(t.body), _raw_subst(t.subst))
    if isinstance(t, Upd):
        return Closure(raw_form(t.body), _lift_n(SHIFT, t.i))
    if isinstance(t, Sub):
        return Closure(raw_form(t.body), _lift_n(Slash(raw_form(t.arg)), t.i))
    raise TypeError(f"not a term: {t!r}")


def _raw_subst(s) -> RawSubst:
    if isinstance(s, Slash):
        return Slash(raw_form(s.term))
    if isinstance(s, Lift):
        return Lift(_raw_subst(s.subst))
    if isinstance(s, Shift):
        return s
    raise TypeError(f"not a substitution: {s!r}")


def abbrev_form(t) -> UpsilonTerm:
    """Spell every closure as an updater or a delayed substitution."""
    if isinstance(t, Index):
        return t
    if isinstance(t, Abs):
        return Abs(abbrev_form(t.body))
    if isinstance(t, App):
        return App(abbrev_form(t.fun), abbrev_form(t.arg))
    if isinstance(t, Upd):
        return Upd(abbrev_form(t.body), t.i)
    if isinstance(t, Sub):
        return Sub(abbrev_form(t.body), abbrev_form(t.arg), t.i)
    if isinstance(t, Closure):
        k = 0
        core = t.subst
        while isinstance(core, Lift):
            k += 1
            core = core.subst
        if isinstance(core, Shift):
            return Upd(abbrev_form(t.body), k)
        return Sub(abbrev_form(t.body), abbrev_form(core.term), k)
    raise TypeError(f"not a term: {t!r}")


def is_plain(t) -> bool:
    if isinstance(t, Index):
        return True
    if isinstance(t, Abs):
        return is_plain(t.body)
    if isinstance(t, App):
        return is_plain(t.fun) and is_plain(t.arg)
    return False


def to_raw(t: PlainTerm) -> RawUpsilonTerm:
    """Embed a plain term; the ASTs coincide, so this just validates."""
    if not is_plain(t):
        raise TypeError("to_raw expects a plain term")
    return t


def from_raw(t: RawUpsilonTerm) -> PlainTerm:
    """Project a closure-free raw term back to a plain term."""
    if not is_plain(t):
        raise ClosureRemains("substitution syntax survived normalization")
    return t


# ---------------------------------------------------------------------------
# Typing.  The rules are stated on abbreviated syntax; closures are converted
# first (the two forms denote the same terms).

def _infer_in(t) -> Derivation:
    if isinstance(t, Index):
        return Derivation("ind", t, (t.n,), ())
    if isinstance(t, Abs):
        body = _infer_in(t.body)
        if not body.ltype or body.ltype[0] != 0:
            raise AbsHeadMissing(body.ltype)
        return Derivation("abs", t, decrement(body.ltype[1:]), (body,))
    if isinstance(t, App):
        fun = _infer_in(t.fun)
        arg = _infer_in(t.arg)
        return Derivation("app", t, merge(fun.ltype, arg.ltype), (fun, arg))
    if isinstance(t, Upd):
        body = _infer_in(t.body)
        low = filter_ltype(LessThan(t.i), body.ltype)
        high = increment(filter_ltype(AtLeast(t.i), body.ltype))
        return Derivation("upd", t, merge(low, high), (body,))
    if isinstance(t, Sub):
        body = _infer_in(t.body)
        # the replacement is inferred even when unused: it must be well formed
        arg = _infer_in(t.arg)
        low = filter_ltype(LessThan(t.i), body.ltype)
        high = decrement(filter_ltype(GreaterThan(t.i), body.ltype))
        base = merge(low, high)
        if t.i in body.ltype:
            return Derivation(
                "sub_in", t, merge(base, increment(arg.ltype, t.i)), (body, arg)
            )
        return Derivation("sub_out", t, base, (body, arg))
    raise TypeError(f"not a typeable term: {t!r}")


def infer_upsilon(t) -> Typing:
    """Infer the list type; closures are read as their abbreviated spelling."""
    term = abbrev_form(t)
    derivation = _infer_in(term)
    return Typing(term, derivation.ltype, derivation)


@dataclass(frozen=True, slots=True)
class PreservationReport:
    rule: str
    path: Path
    before: LType
    after: LType
    term_after: object


def check_preservation_step(t: UpsilonTerm, path: Path) -> PreservationReport:
    """Step at path and require the list type to survive unchanged."""
    before = infer_upsilon(t).ltype
    term_after, rule = step_in(abbrev_form(t), path)
    after = infer_upsilon(term_after).ltype
    if after != before:
        raise PreservationViolation(rule, path, before, after)
    return PreservationReport(rule, path, before, after, term_after)


# ---------------------------------------------------------------------------
# Normalization

def normalize_raw(
    t: RawUpsilonTerm, fuel: int = DEFAULT_FUEL, on_step: Optional[OnStep] = None
) -> Tuple[RawUpsilonTerm, int]:
    """Leftmost-outermost normal form under the 8 raw rules, with step count."""
    return normalize_with(t, match_raw, fuel, on_step)


def normalize_in(
    t: UpsilonTerm, fuel: int = DEFAULT_FUEL, on_step: Optional[OnStep] = None
) -> Tuple[UpsilonTerm, int]:
    """Best-effort direct normalization under the 12 abbreviated rules."""
    return normalize_with(abbrev_form(t), match_in, fuel, on_step)


def normalize_lin_pipeline(
    t: PlainTerm, fuel: int = DEFAULT_FUEL, on_step: Optional[OnStep] = None
) -> PlainTerm:
    """Normalize a plain term in five steps.

    Forget any typing, embed into the raw calculus, normalize there, project
    back, and try to re-read the result as a restricted term.  When the input
    has a list type, preservation guarantees the output has the same one; a
    mismatch is a bug and raises LinearityLost.  Untypable inputs still
    normalize: the final re-check is a Maybe, not a gate.
    """
    try:
        in_type: Optional[LType] = infer_lin(t).ltype
    except TypeFailure:
        in_type = None
    nf, _steps = normalize_raw(to_raw(t), fuel, on_step)
    result = from_raw(nf)
    if in_type is not None:
        try:
            out_type = infer_lin(result).ltype
        except TypeFailure as e:
            raise LinearityLost(f"normal form lost typability: {e}") from e
        if out_type != in_type:
            raise LinearityLost(
                f"normal form typed {ltype_text(out_type)} "
                f"instead of {ltype_text(in_type)}"
            )
    return result


# ---------------------------------------------------------------------------
# Concrete syntax.  Postfix operators bind tighter than application, which
# binds tighter than lambda:  \0 ^ 1  is  \(0 ^ 1),  f g ^ 1  is  f (g ^ 1).

_ATOM_STARTS = ("NUM", "LAM", "LP")
_SUFFIX_STARTS = ("CARET", "LB", "LK")


def _parse_term(ts: TokenStream):
    t = _parse_postfixed(ts)
    while ts.peek().kind in _ATOM_STARTS:
        t = App(t, _parse_postfixed(ts))
    return t


def _parse_postfixed(ts: TokenStream):
    t = _parse_atom(ts)
    while ts.peek().kind in _SUFFIX_STARTS:
        kind = ts.next().kind
        if kind == "CARET":
            t = Upd(t, int(ts.expect("NUM", "natural number").text))
        elif kind == "LB":
            arg = _parse_term(ts)
            ts.expect("COMMA", "','")
            i = int(ts.expect("NUM", "natural number").text)
            ts.expect("RB", "'}'")
            t = Sub(t, arg, i)
        else:
            subst = _parse_subst(ts)
            ts.expect("RK", "']'")
            t = Closure(t, subst)
    return t


def _parse_subst(ts: TokenStream):
    kind = ts.peek().kind
    if kind == "DCARET":
        ts.next()
        return Lift(_parse_subst(ts))
    if kind == "BANG":
        ts.next()
        return SHIFT
    term = _parse_term(ts)
    ts.expect("SLASH", "'/'")
    return Slash(term)


def _parse_atom(ts: TokenStream):
    tok = ts.peek()
    if tok.kind == "NUM":
        ts.next()
        return Index(int(tok.text))
    if tok.kind == "LAM":
        ts.next()
        return Abs(_parse_term(ts))
    if tok.kind == "LP":
        ts.next()
        t = _parse_term(ts)
        ts.expect("RP", "')'")
        return t
    ts.fail(("index", "'\\'", "'('"))


def parse_upsilon(src: str):
    """Parse either spelling; raw and abbreviated postfixes may mix."""
    ts = TokenStream(tokenize(src))
    t = _parse_term(ts)
    ts.expect("END", "end of input")
    return t


def _wrap_postfix_body(t, text: str) -> str:
    return f"({text})" if isinstance(t, (App, Abs)) else text


def print_upsilon(t) -> str:
    if isinstance(t, Index):
        return str(t.n)
    if isinstance(t, Abs):
        body = print_upsilon(t.body)
        return "\\" + (f"({body})" if isinstance(t.body, App) else body)
    if isinstance(t, App):
        fun = print_upsilon(t.fun)
        if isinstance(t.fun, Abs):
            fun = f"({fun})"
        arg = print_upsilon(t.arg)
        if isinstance(t.arg, (App, Abs)):
            arg = f"({arg})"
        return f"{fun} {arg}"
    if isinstance(t, Upd):
        return f"{_wrap_postfix_body(t.body, print_upsilon(t.body))} ^ {t.i}"
    if isinstance(t, Sub):
        body = _wrap_postfix_body(t.body, print_upsilon(t.body))
        return f"{body} {{{print_upsilon(t.arg)}, {t.i}}}"
    if isinstance(t, Closure):
        body = _wrap_postfix_body(t.body, print_upsilon(t.body))
        return f"{body} [{_print_subst(t.subst)}]"
    raise TypeError(f"not a term: {t!r}")


def _print_subst(s) -> str:
    if isinstance(s, Slash):
        return f"{print_upsilon(s.term)} /"
    if isinstance(s, Lift):
        return f"^^ {_print_subst(s.subst)}"
    if isinstance(s, Shift):
        return "!"
    raise TypeError(f"not a substitution: {s!r}")
