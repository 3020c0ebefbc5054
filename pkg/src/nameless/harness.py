"""Machine-checking suites: enumerators, an independent normalizer, reports.

The suites check, on bounded universes, the statements the library is built
around: the seven list-algebra equations, type preservation of every rewrite
step in both resource-aware systems, the read/readback identity, and
agreement of the five-stage normalization pipeline with an independent
textbook normalizer that shares no code with the rewrite engines.

Each suite returns a SuiteReport and can stream one record per case to a
sink callable; `write_reports` renders the whole run as line-delimited
records plus summary figures.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .lin import ENUMERATION_CAP, enumerate_closed_linear, infer_lin
from .ltypes import (
    AtLeast,
    GreaterThan,
    LessThan,
    LType,
    TypeFailure,
    decrement,
    filter_ltype,
    increment,
    ltype_text,
    merge,
)
from .resource import BESTIARY, infer_r, match_r, parse_r, print_r, read, readback, step_r
from .rewrite import iter_redexes, node_children
from .terms import Abs, App, FuelExhausted, Index, PlainTerm, parse_plain, print_plain
from .upsilon import (
    DEFAULT_FUEL,
    infer_upsilon,
    match_in,
    normalize_lin_pipeline,
    normalize_raw,
    step_in,
    to_raw,
)

Sink = Optional[Callable[[dict], None]]


@dataclass
class Failure:
    suite: str
    case: str
    message: str
    minimized: str


@dataclass
class SuiteReport:
    suite: str
    cases: int
    failures: List[Failure]
    seconds: float
    details: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def lines(self) -> Iterator[str]:
        verdict = "pass" if self.passed else "FAIL"
        yield (
            f"suite {self.suite}: {verdict}, {self.cases} cases, "
            f"{len(self.failures)} failures, {self.seconds:.2f}s"
        )
        for key, value in sorted(self.details.items()):
            yield f"  {key}: {value}"
        for f in self.failures[:20]:
            yield f"  FAIL {f.case}: {f.message} (minimized: {f.minimized})"


def _emit(sink: Sink, suite: str, case: str, verdict: str) -> None:
    if sink is not None:
        sink({"suite": suite, "case": case, "verdict": verdict})


# ---------------------------------------------------------------------------
# Independent oracle: textbook shift/substitute normal-order reduction.
# Deliberately self-contained; shares nothing with the rewrite engines.

def _shift(t: PlainTerm, by: int, cutoff: int = 0) -> PlainTerm:
    if isinstance(t, Index):
        return Index(t.n + by) if t.n >= cutoff else t
    if isinstance(t, Abs):
        return Abs(_shift(t.body, by, cutoff + 1))
    return App(_shift(t.fun, by, cutoff), _shift(t.arg, by, cutoff))


def _substitute(t: PlainTerm, j: int, s: PlainTerm) -> PlainTerm:
    if isinstance(t, Index):
        if t.n == j:
            return _shift(s, j)
        return Index(t.n - 1) if t.n > j else t
    if isinstance(t, Abs):
        return Abs(_substitute(t.body, j + 1, s))
    return App(_substitute(t.fun, j, s), _substitute(t.arg, j, s))


def _leftmost_beta(t: PlainTerm) -> Optional[PlainTerm]:
    if isinstance(t, App) and isinstance(t.fun, Abs):
        return _substitute(t.fun.body, 0, t.arg)
    if isinstance(t, Abs):
        body = _leftmost_beta(t.body)
        return None if body is None else Abs(body)
    if isinstance(t, App):
        fun = _leftmost_beta(t.fun)
        if fun is not None:
            return App(fun, t.arg)
        arg = _leftmost_beta(t.arg)
        return None if arg is None else App(t.fun, arg)
    return None


def oracle_beta_normalize(t: PlainTerm, fuel: int = DEFAULT_FUEL) -> PlainTerm:
    for _ in range(fuel):
        nxt = _leftmost_beta(t)
        if nxt is None:
            return t
        t = nxt
    if _leftmost_beta(t) is None:
        return t
    raise FuelExhausted(fuel)


# ---------------------------------------------------------------------------
# Universe enumeration: every term whose indices stay within 0..binder-depth
# (one past the last bound index, so free indices appear at every level).
# Streamed, not cached: the size-12 universe holds 710814 terms.

def _plain_universe(size: int, depth: int) -> Iterator[PlainTerm]:
    if size == 1:
        for n in range(depth + 1):
            yield Index(n)
        return
    for body in _plain_universe(size - 1, depth + 1):
        yield Abs(body)
    for left in range(1, size - 1):
        for fun in _plain_universe(left, depth):
            for arg in _plain_universe(size - 1 - left, depth):
                yield App(fun, arg)


def enumerate_plain_terms(max_size: int) -> Iterator[PlainTerm]:
    for size in range(1, max_size + 1):
        yield from _plain_universe(size, 0)


def count_plain_terms(max_size: int) -> int:
    counts: Dict[Tuple[int, int], int] = {}

    def count(size: int, depth: int) -> int:
        key = (size, depth)
        if key not in counts:
            total = depth + 1 if size == 1 else 0
            if size >= 2:
                total += count(size - 1, depth + 1)
            for left in range(1, size - 1):
                total += count(left, depth) * count(size - 1 - left, depth)
            counts[key] = total
        return counts[key]

    return sum(count(size, 0) for size in range(1, max_size + 1))


# ---------------------------------------------------------------------------
# Deterministic shrinking

def _subterms(t) -> Iterator[object]:
    for kid in node_children(t):
        yield kid
        yield from _subterms(kid)


def _minimize_term(t, still_fails: Callable[[object], bool]):
    while True:
        for sub in _subterms(t):
            try:
                if still_fails(sub):
                    t = sub
                    break
            except Exception:
                continue
        else:
            return t


def _shrink_lists(
    lists: Tuple[LType, ...], still_fails: Callable[[Tuple[LType, ...]], bool]
) -> Tuple[LType, ...]:
    changed = True
    while changed:
        changed = False
        for which in range(len(lists)):
            for drop in range(len(lists[which])):
                trimmed = lists[which][:drop] + lists[which][drop + 1:]
                candidate = lists[:which] + (trimmed,) + lists[which + 1:]
                if still_fails(candidate):
                    lists = candidate
                    changed = True
                    break
            if changed:
                break
    return lists


# ---------------------------------------------------------------------------
# The seven list-algebra equations.  Every equation is checked only when all
# lists appearing in it are defined; undefined constituents skip the case.

def _shift_predicate(p):
    return type(p)(p.i + 1)


def _eval_or_none(thunk):
    try:
        return thunk()
    except TypeFailure:
        return None


LEMMA_ITEMS = ("a", "b", "c", "d", "e", "f", "g")


def _lemma_sides(item: str, l1: LType, l2: LType, l3: LType, p) -> Optional[Tuple[LType, LType]]:
    """Both sides of one equation, or None when a constituent is undefined."""
    if item == "a":
        lhs = _eval_or_none(lambda: merge(l1, l2))
        rhs = _eval_or_none(lambda: merge(l2, l1))
        if lhs is None or rhs is None:
            return None
        return lhs, rhs
    if item == "b":
        m23 = _eval_or_none(lambda: merge(l2, l3))
        m12 = _eval_or_none(lambda: merge(l1, l2))
        if m23 is None or m12 is None:
            return None
        lhs = _eval_or_none(lambda: merge(l1, m23))
        rhs = _eval_or_none(lambda: merge(m12, l3))
        if lhs is None or rhs is None:
            return None
        return lhs, rhs
    if item == "c":
        m = _eval_or_none(lambda: merge(l1, l2))
        lhs = _eval_or_none(lambda: merge(filter_ltype(p, l1), filter_ltype(p, l2)))
        if m is None or lhs is None:
            return None
        return lhs, filter_ltype(p, m)
    if item == "d":
        m = _eval_or_none(lambda: merge(l1, l2))
        lhs = _eval_or_none(lambda: merge(increment(l1), increment(l2)))
        if m is None or lhs is None:
            return None
        return lhs, increment(m)
    if item == "e":
        d1 = _eval_or_none(lambda: decrement(l1))
        d2 = _eval_or_none(lambda: decrement(l2))
        m = _eval_or_none(lambda: merge(l1, l2))
        if d1 is None or d2 is None or m is None:
            return None
        lhs = _eval_or_none(lambda: merge(d1, d2))
        rhs = _eval_or_none(lambda: decrement(m))
        if lhs is None or rhs is None:
            return None
        return lhs, rhs
    if item == "f":
        return increment(filter_ltype(p, l1)), filter_ltype(
            _shift_predicate(p), increment(l1)
        )
    if item == "g":
        lhs = _eval_or_none(lambda: decrement(filter_ltype(_shift_predicate(p), l1)))
        dl = _eval_or_none(lambda: decrement(l1))
        if lhs is None or dl is None:
            return None
        return lhs, filter_ltype(p, dl)
    raise ValueError(f"unknown item {item!r}")


def run_lemma_suite(
    max_list_len: int = 4,
    max_elem: int = 6,
    seed: int = 0,
    random_cases: int = 10_000,
    sink: Sink = None,
) -> SuiteReport:
    """Check equations a-g exhaustively on small lists, then at random.

    The exhaustive pass covers every sorted duplicate-free list over
    0..max_elem-1 of length <= max_list_len (and every predicate with
    thresholds 0..max_elem); the random pass draws `random_cases` more
    cases from a wider domain with the given seed.
    """
    if max_list_len <= 0 or max_elem <= 0:
        raise ValueError("bounds must be positive")
    start = time.perf_counter()
    counts = {item: {"checked": 0, "skipped": 0} for item in LEMMA_ITEMS}
    failures: List[Failure] = []
    cases = 0

    def check(item: str, l1: LType, l2: LType, l3: LType, p) -> None:
        nonlocal cases
        cases += 1
        sides = _lemma_sides(item, l1, l2, l3, p)
        case_id = f"{item}:{list(l1)}|{list(l2)}|{list(l3)}|{p}"
        if sides is None:
            counts[item]["skipped"] += 1
            _emit(sink, "lemma", case_id, "skip")
            return
        lhs, rhs = sides
        if lhs == rhs:
            counts[item]["checked"] += 1
            _emit(sink, "lemma", case_id, "pass")
            return
        _emit(sink, "lemma", case_id, "fail")

        def still_fails(ls):
            got = _lemma_sides(item, ls[0], ls[1], ls[2], p)
            return got is not None and got[0] != got[1]

        small = _shrink_lists((l1, l2, l3), still_fails)
        failures.append(
            Failure(
                "lemma",
                case_id,
                f"{ltype_text(lhs)} != {ltype_text(rhs)}",
                f"{[list(x) for x in small]} with {p}",
            )
        )

    lists = [
        tuple(combo)
        for n in range(max_list_len + 1)
        for combo in itertools.combinations(range(max_elem), n)
    ]
    predicates = [
        kind(i) for kind in (LessThan, GreaterThan, AtLeast) for i in range(max_elem + 1)
    ]
    empty: LType = ()
    for l1, l2 in itertools.product(lists, lists):
        check("a", l1, l2, empty, None)
        check("d", l1, l2, empty, None)
        check("e", l1, l2, empty, None)
    for l1, l2, l3 in itertools.product(lists, lists, lists):
        check("b", l1, l2, l3, None)
    for l1, l2 in itertools.product(lists, lists):
        for p in predicates:
            check("c", l1, l2, empty, p)
    for l1 in lists:
        for p in predicates:
            check("f", l1, empty, empty, p)
            check("g", l1, empty, empty, p)

    rng = random.Random(seed)
    wide = 5 * max_elem
    kinds = (LessThan, GreaterThan, AtLeast)

    def draw() -> LType:
        return tuple(sorted(rng.sample(range(wide), rng.randint(0, 2 * max_list_len))))

    for _ in range(random_cases):
        item = rng.choice(LEMMA_ITEMS)
        p = rng.choice(kinds)(rng.randint(0, wide))
        check(item, draw(), draw(), draw(), p)

    return SuiteReport(
        "lemma",
        cases,
        failures,
        time.perf_counter() - start,
        {"items": counts, "exhaustive_lists": len(lists), "random_cases": random_cases},
    )


# ---------------------------------------------------------------------------
# Preservation suites

SK_SOURCE = r"(\\\(2 0 (1 0))) (\\1)"

# fire the two abbreviated-rule shapes the closed-linear universe misses
UPSILON_COVERAGE_SOURCES = (SK_SOURCE, r"(\\1) (0 0)", r"(\\1) (\1)")

# one well-typed configuration per named rule, stepped at the root
R_RULE_DEMO_SOURCES = (
    r"\era 1 0",
    r"dup 0_1 \(0 (1_10 1_11))",
    r"(era 2 0) 1",
    r"0 (era 2 1)",
    r"dup 0 (0_0 0_1 1)",
    r"dup 0 (1 (0_0 0_1))",
    r"era 0 era 1 2",
    r"dup 0 era 0_1 0_0",
    r"dup 0 era 0_0 0_1",
    r"dup 0 era 1 (0_0 0_1)",
    r"dup 0 dup 0_1 (0_0 0_10 0_11)",
    r"dup 0 dup 1 (0_0 0_1 (1_0 1_1))",
)


def _ltype_or_none(infer, t) -> Optional[LType]:
    try:
        return infer(t).ltype
    except TypeFailure:
        return None


def _walk_trace(
    t,
    match,
    step,
    infer,
    exact: bool,
    suite: str,
    label: str,
    failures: List[Failure],
    rules: Counter,
    fuel: int,
    sink: Sink,
) -> int:
    """Fire every redex at every state of the leftmost trace from t.

    With exact=True the inferred type must match the start type after every
    fired step; otherwise the check is conditional: states without a type
    make no demand, typed states must keep their exact type.
    """
    checked = 0
    current = t
    for _ in range(fuel):
        before = _ltype_or_none(infer, current)
        if exact and before is None:
            failures.append(
                Failure(suite, label, "corpus term lost its type mid-trace", label)
            )
            return checked
        redexes = list(iter_redexes(current, match))
        for path, rule in redexes:
            rules[rule] += 1
            checked += 1
            case_id = f"{label} @{'.'.join(map(str, path)) or '-'} {rule}"
            if before is None:
                _emit(sink, suite, case_id, "skip")
                continue
            after_term, _ = step(current, path)
            after = _ltype_or_none(infer, after_term)
            if after == before:
                _emit(sink, suite, case_id, "pass")
                continue
            _emit(sink, suite, case_id, "fail")

            def drifts(sub):
                lt = _ltype_or_none(infer, sub)
                if lt is None:
                    return False
                for q, _r in iter_redexes(sub, match):
                    stepped, _ = step(sub, q)
                    if _ltype_or_none(infer, stepped) != lt:
                        return True
                return False

            small = _minimize_term(current, drifts)
            failures.append(
                Failure(
                    suite,
                    case_id,
                    f"type {ltype_text(before)} became "
                    f"{'untypable' if after is None else ltype_text(after)} via {rule}",
                    repr(small),
                )
            )
        if not redexes:
            return checked
        current = step(current, redexes[0][0])[0]
    failures.append(Failure(suite, label, f"trace exceeded fuel {fuel}", label))
    return checked


def run_preservation_suite(
    max_term_size: int = 9, fuel: int = DEFAULT_FUEL, sink: Sink = None
) -> SuiteReport:
    """Every rewrite step anywhere in every corpus term keeps the type.

    Corpora: all closed linear plain terms up to max_term_size (exact checks
    in the abbreviated substitution system), extra coverage terms under the
    conditional check, and on the resource side the reads of the full plain
    universe, the fixed combinator corpus, and the twelve one-rule
    configurations.  Raw-system rule usage is logged from the same traces.
    """
    if max_term_size > ENUMERATION_CAP:
        raise ValueError(f"max_term_size above enumeration cap {ENUMERATION_CAP}")
    start = time.perf_counter()
    failures: List[Failure] = []
    rules_raw: Counter = Counter()
    rules_in: Counter = Counter()
    rules_r: Counter = Counter()
    exact_cases = conditional_cases = resource_cases = 0

    def raw_trace(t, label: str) -> None:
        try:
            normalize_raw(to_raw(t), fuel, lambda i, rule, path, term: rules_raw.update([rule]))
        except FuelExhausted:
            failures.append(Failure("preservation", label, f"raw trace exceeded fuel {fuel}", label))

    for t in enumerate_closed_linear(max_term_size):
        label = print_plain(t)
        exact_cases += _walk_trace(
            t, match_in, step_in, infer_upsilon, True,
            "preservation", label, failures, rules_in, fuel, sink,
        )
        raw_trace(t, label)

    for src in UPSILON_COVERAGE_SOURCES:
        t = parse_plain(src)
        conditional_cases += _walk_trace(
            t, match_in, step_in, infer_upsilon, False,
            "preservation", src, failures, rules_in, fuel, sink,
        )
        raw_trace(t, src)

    corpus = [(print_plain(t), read(t)) for t in enumerate_plain_terms(max_term_size)]
    corpus += [(name, term) for name, term in BESTIARY]
    corpus += [(src, parse_r(src)) for src in R_RULE_DEMO_SOURCES]
    for label, rterm in corpus:
        resource_cases += _walk_trace(
            rterm, match_r, step_r, infer_r, True,
            "preservation", f"r:{label}", failures, rules_r, fuel, sink,
        )

    return SuiteReport(
        "preservation",
        exact_cases + conditional_cases + resource_cases,
        failures,
        time.perf_counter() - start,
        {
            "exact_cases": exact_cases,
            "conditional_cases": conditional_cases,
            "resource_cases": resource_cases,
            "resource_corpus": len(corpus),
            "rules_raw": dict(sorted(rules_raw.items())),
            "rules_in": dict(sorted(rules_in.items())),
            "rules_r": dict(sorted(rules_r.items())),
        },
    )


# ---------------------------------------------------------------------------
# Translation roundtrip and pipeline/oracle agreement

def run_roundtrip_suite(max_size: int = 12, sink: Sink = None) -> SuiteReport:
    """readback(read t) = t and standardize(read t) = read t, exhaustively."""
    start = time.perf_counter()
    failures: List[Failure] = []
    cases = 0
    for t in enumerate_plain_terms(max_size):
        cases += 1
        decorated = read(t)
        back = readback(decorated)
        again = read(back)
        ok = back == t and again == decorated
        _emit(sink, "roundtrip", print_plain(t), "pass" if ok else "fail")
        if ok:
            continue
        if back != t:
            small = _minimize_term(t, lambda s: readback(read(s)) != s)
            failures.append(
                Failure(
                    "roundtrip",
                    print_plain(t),
                    f"readback(read t) = {print_plain(back)}",
                    print_plain(small),
                )
            )
        else:
            small = _minimize_term(t, lambda s: read(readback(read(s))) != read(s))
            failures.append(
                Failure(
                    "roundtrip",
                    print_plain(t),
                    "standardize moved a read image",
                    print_plain(small),
                )
            )
    return SuiteReport(
        "roundtrip",
        cases,
        failures,
        time.perf_counter() - start,
        {"max_size": max_size},
    )


def run_pipeline_suite(
    max_size: int = 9, fuel: int = DEFAULT_FUEL, sink: Sink = None
) -> SuiteReport:
    """The five-stage pipeline agrees with the independent normalizer."""
    start = time.perf_counter()
    failures: List[Failure] = []
    cases = 0

    def disagrees(t) -> bool:
        try:
            if infer_lin(t).ltype != ():
                return False
        except TypeFailure:
            return False
        return normalize_lin_pipeline(t, fuel) != oracle_beta_normalize(t, fuel)

    for t in enumerate_closed_linear(max_size):
        cases += 1
        label = print_plain(t)
        try:
            got = normalize_lin_pipeline(t, fuel)
            want = oracle_beta_normalize(t, fuel)
        except Exception as e:
            _emit(sink, "pipeline", label, "fail")
            failures.append(Failure("pipeline", label, f"raised {e!r}", label))
            continue
        if got == want:
            _emit(sink, "pipeline", label, "pass")
            continue
        _emit(sink, "pipeline", label, "fail")
        small = _minimize_term(t, disagrees)
        failures.append(
            Failure(
                "pipeline",
                label,
                f"pipeline {print_plain(got)} != oracle {print_plain(want)}",
                print_plain(small),
            )
        )
    return SuiteReport(
        "pipeline",
        cases,
        failures,
        time.perf_counter() - start,
        {"max_size": max_size},
    )


# ---------------------------------------------------------------------------
# Whole-run driver and report rendering

def run_all_suites(
    max_term_size: int = 9,
    roundtrip_size: int = 12,
    seed: int = 0,
    fuel: int = DEFAULT_FUEL,
    sink: Sink = None,
) -> List[SuiteReport]:
    return [
        run_lemma_suite(seed=seed, sink=sink),
        run_preservation_suite(max_term_size, fuel, sink),
        run_roundtrip_suite(roundtrip_size, sink),
        run_pipeline_suite(max_term_size, fuel, sink),
    ]


def render_figures(reports: Sequence[SuiteReport], out_dir: str) -> List[str]:
    """Summary bar chart plus rule-coverage histogram, written as PNG files."""
    import os

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(out_dir, exist_ok=True)
    written = []

    names = [r.suite for r in reports]
    fig, ax = plt.subplots(figsize=(7, 4))
    xs = range(len(reports))
    ax.bar(xs, [r.cases for r in reports], color="#4878a8", label="cases")
    ax.bar(
        xs,
        [len(r.failures) for r in reports],
        color="#c44e52",
        label="failures",
    )
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names)
    ax.set_yscale("symlog")
    ax.set_ylabel("cases")
    ax.set_title("suite outcomes")
    ax.legend()
    path = os.path.join(out_dir, "suite_summary.png")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    written.append(path)

    coverage: Dict[str, Dict[str, int]] = {}
    for r in reports:
        for key, prefix in (("rules_raw", "raw"), ("rules_in", "in"), ("rules_r", "r")):
            for rule, count in r.details.get(key, {}).items():
                coverage.setdefault(prefix, {})[rule] = count
    if coverage:
        total = sum(len(v) for v in coverage.values())
        fig, ax = plt.subplots(figsize=(max(8, total * 0.45), 4.5))
        labels, values, colors = [], [], []
        palette = {"raw": "#4878a8", "in": "#6aa84f", "r": "#b45f9d"}
        for prefix in ("raw", "in", "r"):
            for rule, count in sorted(coverage.get(prefix, {}).items()):
                labels.append(f"{prefix}:{rule}")
                values.append(count)
                colors.append(palette[prefix])
        ax.bar(range(len(labels)), values, color=colors)
        ax.set_xticks(range(len(labels)))
        ax.set_xticklabels(labels, rotation=75, ha="right", fontsize=7)
        ax.set_yscale("log")
        ax.set_ylabel("times fired")
        ax.set_title("rule coverage")
        path = os.path.join(out_dir, "rule_coverage.png")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
        written.append(path)
    return written


def write_reports(
    reports: Sequence[SuiteReport],
    out_dir: str,
    records_name: str = "cases.ndjson",
) -> List[str]:
    """Write the human summary and figures for an already-run set of suites.

    Case records stream through the sink during the run; this writes the
    per-suite summaries (summary.txt, summary.json) and the figures.
    """
    import os

    os.makedirs(out_dir, exist_ok=True)
    written = []
    text_path = os.path.join(out_dir, "summary.txt")
    with open(text_path, "w", encoding="utf-8") as fh:
        for r in reports:
            for line in r.lines():
                fh.write(line + "\n")
    written.append(text_path)
    json_path = os.path.join(out_dir, "summary.json")
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(
            [
                {
                    "suite": r.suite,
                    "cases": r.cases,
                    "failures": [vars(f) for f in r.failures],
                    "seconds": r.seconds,
                    "details": r.details,
                }
                for r in reports
            ],
            fh,
            indent=2,
        )
    written.append(json_path)
    written.extend(render_figures(reports, out_dir))
    return written
