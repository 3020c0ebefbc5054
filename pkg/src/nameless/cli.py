"""Command-line front end over the three calculi.

Commands: parse, typecheck, step, normalize, read, readback, standardize,
check-linear, enumerate, suite.  One calculus flag selects grammar and engine.
Results and traces go to stdout; diagnostics go to stderr.  Exit status: 0 on
success, 1 on a domain failure (typing, fuel, no redex), 2 on usage or syntax
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Callable, List, Optional, Sequence

from .harness import run_all_suites, write_reports
from .lin import enumerate_closed_linear, infer_lin
from .ltypes import TypeFailure, ltype_text
from .resource import (
    NotWellFormed,
    beta_r,
    enumerate_representatives,
    infer_r,
    match_r,
    normalize_dup_era,
    parse_r,
    print_r,
    read,
    readback,
    standardize,
    step_r,
)
from .rewrite import find_first_redex
from .terms import (
    CapExceeded,
    FuelExhausted,
    NoRedex,
    ParseError,
    parse_plain,
    path_text,
    print_plain,
)
from .upsilon import (
    DEFAULT_FUEL,
    ClosureRemains,
    LinearityLost,
    PreservationViolation,
    abbrev_form,
    infer_upsilon,
    match_in,
    normalize_in,
    normalize_lin_pipeline,
    parse_upsilon,
    print_upsilon,
    step_in,
)


class UsageError(Exception):
    """Bad command usage detected after argument parsing."""


_GRAMMARS = {
    "lin": (
        "term  ::= '\\' term             abstraction; the body extends right\n"
        "        | term term             application, left-associative\n"
        "        | NUM                   variable index (0-based)\n"
        "        | '(' term ')'"
    ),
    "upsilon": (
        "term  ::= '\\' term | term term | NUM | '(' term ')'\n"
        "        | term '[' sub ']'      closure\n"
        "        | term '^' NUM          update\n"
        "        | term '{' term ',' NUM '}'   substitution\n"
        "sub   ::= term '/' | '^^' sub | '!'"
    ),
    "r": (
        "term  ::= '\\' term | term term | IDX | '(' term ')'\n"
        "        | 'era' IDX term        eraser; the body extends right\n"
        "        | 'dup' IDX term        duplicator; the body extends right\n"
        "IDX   ::= NUM | NUM '_' BITS    depth, optional branch path, e.g. 0_01"
    ),
}

_PARSERS = {"lin": parse_plain, "upsilon": parse_upsilon, "r": parse_r}
_PRINTERS = {"lin": print_plain, "upsilon": print_upsilon, "r": print_r}
_INFERS = {"lin": infer_lin, "upsilon": infer_upsilon, "r": infer_r}


def _print_any(t) -> str:
    """Display a term from any of the calculi."""
    try:
        return print_upsilon(t)
    except TypeError:
        return print_r(t)


def _input_text(ns) -> str:
    if ns.file is not None and ns.input is not None:
        raise UsageError("give the term inline or with --file, not both")
    if ns.file is not None:
        with open(ns.file, "r", encoding="utf-8") as fh:
            return fh.read()
    if ns.input is None:
        raise UsageError("missing input term (inline argument or --file PATH)")
    return ns.input


def _emit(ns, obj: dict, lines: Sequence[str]) -> None:
    if ns.json:
        print(json.dumps(obj))
    else:
        for line in lines:
            print(line)


def _ltype_fields(lt) -> list:
    return [ix if isinstance(ix, int) else str(ix) for ix in lt]


def _diagnostic(e: Exception) -> str:
    if isinstance(e, PreservationViolation) and len(e.args) == 4:
        rule, path, before, after = e.args
        return (
            f"PreservationViolation: rule {rule} at {path_text(path)} changed "
            f"the type from {ltype_text(before)} to {ltype_text(after)}"
        )
    if isinstance(e, FuelExhausted) and e.args:
        return f"FuelExhausted: no normal form within {e.args[0]} steps"
    return f"{type(e).__name__}: {e}"


# ---------------------------------------------------------------------------
# Command handlers


def _cmd_parse(ns) -> int:
    t = _PARSERS[ns.calculus](_input_text(ns))
    printed = _PRINTERS[ns.calculus](t)
    _emit(ns, {"calculus": ns.calculus, "term": printed}, [printed])
    return 0


def _cmd_typecheck(ns) -> int:
    t = _PARSERS[ns.calculus](_input_text(ns))
    typing = _INFERS[ns.calculus](t)
    lines = [ltype_text(typing.ltype)]
    obj = {"calculus": ns.calculus, "ltype": _ltype_fields(typing.ltype)}
    if ns.trace:
        derivation = list(typing.derivation.lines(_PRINTERS[ns.calculus]))
        lines.extend(derivation)
        obj["derivation"] = derivation
    _emit(ns, obj, lines)
    return 0


def _engine(calculus: str):
    """(prepare, match, step, infer, print) for the rewriting commands."""
    if calculus == "r":
        return (lambda t: t), match_r, step_r, infer_r, print_r
    return abbrev_form, match_in, step_in, infer_upsilon, print_upsilon


def _cmd_step(ns) -> int:
    prepare, match, stepper, _infer, printer = _engine(ns.calculus)
    t = prepare(_PARSERS[ns.calculus](_input_text(ns)))
    found = find_first_redex(t, match)
    if found is None:
        raise NoRedex("the term is already in normal form")
    path, _ = found
    stepped, rule = stepper(t, path)
    printed = printer(stepped)
    _emit(
        ns,
        {"rule": rule, "path": path_text(path), "term": printed},
        [f"{rule}  {path_text(path)}  {printed}"],
    )
    return 0


def _verified_normalize(t, match, stepper, infer, fuel: int, cb) -> tuple:
    """Leftmost rewriting that re-infers the type after every step."""
    want = infer(t).ltype
    steps = 0
    while True:
        found = find_first_redex(t, match)
        if found is None:
            return t, steps
        if steps >= fuel:
            raise FuelExhausted(fuel)
        path, _ = found
        t, rule = stepper(t, path)
        steps += 1
        got = infer(t).ltype
        if got != want:
            raise PreservationViolation(rule, path, want, got)
        if cb is not None:
            cb(steps, rule, path, t)


def _cmd_normalize(ns) -> int:
    strategy = (
        "beta"
        if ns.beta
        else "pipeline"
        if ns.pipeline
        else "direct"
        if ns.direct
        else ("pipeline" if ns.calculus == "lin" else "direct")
    )
    if strategy == "beta" and ns.calculus != "r":
        raise UsageError("--beta applies to --calculus r only")
    if strategy == "pipeline" and ns.calculus == "r":
        raise UsageError("--pipeline applies to --calculus lin or upsilon")

    t = _PARSERS[ns.calculus](_input_text(ns))
    trace: List[dict] = []
    count = [0]

    def cb(_i: int, rule: str, path, term) -> None:
        count[0] += 1
        if not ns.trace:
            return
        record = {
            "step": count[0],
            "rule": rule,
            "path": path_text(path),
            "term": _print_any(term),
        }
        trace.append(record)
        if not ns.json:
            print(
                f"{record['step']}  {record['rule']}  {record['path']}  "
                f"{record['term']}"
            )

    if strategy == "pipeline":
        from .upsilon import is_plain

        if not is_plain(t):
            raise UsageError("--pipeline takes a plain term (no closures)")
        if ns.verify:
            want = infer_lin(t).ltype

            def checked(i: int, rule: str, path, term) -> None:
                got = infer_upsilon(abbrev_form(term)).ltype
                if got != want:
                    raise PreservationViolation(rule, path, want, got)
                cb(i, rule, path, term)

            result = normalize_lin_pipeline(t, ns.fuel, checked)
        else:
            result = normalize_lin_pipeline(t, ns.fuel, cb)
        printed = print_plain(result)
    elif strategy == "beta":
        result = beta_r(t, ns.fuel, cb)
        printed = print_r(result)
    else:
        prepare, match, stepper, infer, printer = _engine(ns.calculus)
        prepared = prepare(t)
        if ns.verify:
            result, _steps = _verified_normalize(
                prepared, match, stepper, infer, ns.fuel, cb
            )
        elif ns.calculus == "r":
            result, _steps = normalize_dup_era(prepared, ns.fuel, cb)
        else:
            result, _steps = normalize_in(prepared, ns.fuel, cb)
        printed = printer(result)

    obj = {"term": printed, "steps": count[0]}
    if ns.trace:
        obj["trace"] = trace
    _emit(ns, obj, [printed])
    return 0


def _cmd_read(ns) -> int:
    t = parse_plain(_input_text(ns))
    printed = print_r(read(t))
    _emit(ns, {"term": printed}, [printed])
    return 0


def _cmd_readback(ns) -> int:
    t = parse_r(_input_text(ns))
    printed = print_plain(readback(t))
    _emit(ns, {"term": printed}, [printed])
    return 0


def _cmd_standardize(ns) -> int:
    t = parse_r(_input_text(ns))
    printed = print_r(standardize(t))
    _emit(ns, {"term": printed}, [printed])
    return 0


def _cmd_check_linear(ns) -> int:
    t = parse_plain(_input_text(ns))
    try:
        lt = infer_lin(t).ltype
    except TypeFailure as e:
        reason = _diagnostic(e)
        _emit(ns, {"linear": False, "reason": reason}, [f"no: {reason}"])
        return 1
    if lt == ():
        _emit(ns, {"linear": True}, ["yes"])
        return 0
    reason = f"open term of type {ltype_text(lt)}"
    _emit(ns, {"linear": False, "reason": reason}, [f"no: {reason}"])
    return 1


def _cmd_enumerate(ns) -> int:
    if ns.calculus == "r":
        t = parse_plain(_input_text(ns))
        printed = [print_r(r) for r in enumerate_representatives(t)]
    elif ns.calculus == "lin":
        if ns.input is not None or ns.file is not None:
            raise UsageError("enumerate --calculus lin takes no input term")
        printed = [print_plain(t) for t in enumerate_closed_linear(ns.max_size)]
    else:
        raise UsageError(
            "enumerate supports --calculus lin (closed linear terms up to "
            "--max-size) or --calculus r (sharing variants of a plain term)"
        )
    _emit(ns, {"count": len(printed), "terms": printed}, printed)
    return 0


def _cmd_suite(ns) -> int:
    sink: Optional[Callable[[dict], None]] = None
    fh = None
    if ns.report_dir:
        os.makedirs(ns.report_dir, exist_ok=True)
        fh = open(
            os.path.join(ns.report_dir, "cases.ndjson"), "w", encoding="utf-8"
        )

        def sink(record: dict) -> None:
            fh.write(json.dumps(record) + "\n")

    try:
        reports = run_all_suites(
            max_term_size=ns.max_size,
            roundtrip_size=ns.max_size + 3,
            seed=ns.seed,
            fuel=ns.fuel,
            sink=sink,
        )
    finally:
        if fh is not None:
            fh.close()

    if ns.report_dir:
        for path in write_reports(reports, ns.report_dir):
            print(f"wrote {path}", file=sys.stderr)

    if ns.json:
        print(
            json.dumps(
                [
                    {
                        "suite": r.suite,
                        "cases": r.cases,
                        "failures": [vars(f) for f in r.failures],
                        "seconds": r.seconds,
                        "details": r.details,
                    }
                    for r in reports
                ]
            )
        )
    else:
        for r in reports:
            for line in r.lines():
                print(line)
    return 0 if all(r.passed for r in reports) else 1


# ---------------------------------------------------------------------------
# Argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nameless",
        description=(
            "Work with index-based lambda terms in three forms: plain "
            "restricted terms (lin), terms with explicit substitutions "
            "(upsilon), and terms with explicit duplication and erasure (r)."
        ),
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    def common(p, calculus=True, trace=False):
        if calculus:
            p.add_argument(
                "--calculus",
                choices=("lin", "upsilon", "r"),
                default="lin",
                help="term language and engine (default: lin)",
            )
        p.add_argument("--file", metavar="PATH", help="read the term from a file")
        p.add_argument("--json", action="store_true", help="machine output")
        if trace:
            p.add_argument(
                "--trace", action="store_true", help="log every rewrite step"
            )
        p.add_argument("input", nargs="?", help="term text")

    p = sub.add_parser("parse", help="parse and echo the canonical spelling")
    common(p)
    p.set_defaults(handler=_cmd_parse)

    p = sub.add_parser("typecheck", help="infer the list type")
    common(p, trace=True)
    p.set_defaults(handler=_cmd_typecheck)

    p = sub.add_parser("step", help="apply one leftmost-outermost rewrite step")
    common(p)
    p.set_defaults(handler=_cmd_step)

    p = sub.add_parser("normalize", help="rewrite to normal form")
    p.add_argument(
        "--fuel", type=int, default=DEFAULT_FUEL, help="step budget (default 10000)"
    )
    p.add_argument(
        "--verify",
        action="store_true",
        help="re-infer the type after every step; fail fast on a change",
    )
    strategy = p.add_mutually_exclusive_group()
    strategy.add_argument(
        "--pipeline",
        action="store_true",
        help="embed, normalize under explicit substitutions, project back "
        "(default for lin)",
    )
    strategy.add_argument(
        "--direct",
        action="store_true",
        help="rewrite in place with the calculus rules",
    )
    strategy.add_argument(
        "--beta",
        action="store_true",
        help="full beta normalization of a closed linear r-term",
    )
    common(p, trace=True)
    p.set_defaults(handler=_cmd_normalize)

    p = sub.add_parser("read", help="decorate a plain term with dup/era")
    common(p, calculus=False)
    p.set_defaults(handler=_cmd_read, grammar_key="lin")

    p = sub.add_parser("readback", help="strip dup/era back to a plain term")
    common(p, calculus=False)
    p.set_defaults(handler=_cmd_readback, grammar_key="r")

    p = sub.add_parser("standardize", help="readback then read: canonical sharing")
    common(p, calculus=False)
    p.set_defaults(handler=_cmd_standardize, grammar_key="r")

    p = sub.add_parser(
        "check-linear", help="is the plain term closed and linear? (exit 0/1)"
    )
    common(p, calculus=False)
    p.set_defaults(handler=_cmd_check_linear, grammar_key="lin")

    p = sub.add_parser(
        "enumerate",
        help="list closed linear terms (lin) or sharing variants (r)",
    )
    p.add_argument(
        "--max-size",
        type=int,
        default=8,
        metavar="N",
        help="size bound for --calculus lin (default 8)",
    )
    common(p)
    p.set_defaults(handler=_cmd_enumerate, grammar_key="lin")

    p = sub.add_parser("suite", help="run the machine-check suites")
    p.add_argument(
        "--max-size",
        type=int,
        default=9,
        metavar="N",
        help="check terms up to this size; the read/readback sweep goes three "
        "sizes higher (default 9, about a minute)",
    )
    p.add_argument("--seed", type=int, default=0, help="random phase seed")
    p.add_argument(
        "--fuel", type=int, default=DEFAULT_FUEL, help="step budget per case"
    )
    p.add_argument(
        "--report-dir",
        metavar="DIR",
        help="write cases.ndjson, summaries, and figures here",
    )
    p.add_argument("--json", action="store_true", help="machine output")
    p.set_defaults(handler=_cmd_suite)

    return parser


def _grammar_key(ns) -> str:
    fixed = getattr(ns, "grammar_key", None)
    if isinstance(fixed, str):
        return fixed
    return getattr(ns, "calculus", "lin")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        if isinstance(e.code, int):
            return e.code
        return 0 if e.code is None else 2
    if not hasattr(ns, "handler"):
        parser.print_usage(sys.stderr)
        return 2
    try:
        return ns.handler(ns)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        print("expected grammar:", file=sys.stderr)
        print(_GRAMMARS[_grammar_key(ns)], file=sys.stderr)
        return 2
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"cannot read input: {e}", file=sys.stderr)
        return 2
    except (
        TypeFailure,
        NotWellFormed,
        NoRedex,
        FuelExhausted,
        CapExceeded,
        LinearityLost,
        ClosureRemains,
        PreservationViolation,
        ValueError,
    ) as e:
        print(_diagnostic(e), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
