"""Raw and abbreviated rewrite systems, typing, and the pipeline."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nameless.lin import AbsHeadMissing
from nameless.ltypes import MergeConflict
from nameless.terms import Abs, App, FuelExhausted, Index, NoRedex, parse_plain
from nameless.upsilon import (
    SHIFT,
    Closure,
    ClosureRemains,
    Lift,
    Slash,
    Sub,
    Upd,
    abbrev_form,
    check_preservation_step,
    find_first_redex,
    from_raw,
    infer_upsilon,
    iter_redexes,
    match_in,
    match_raw,
    normalize_in,
    normalize_lin_pipeline,
    normalize_raw,
    parse_upsilon,
    print_upsilon,
    raw_form,
    step_in,
    step_raw,
    to_raw,
)

raw_substs = st.deferred(
    lambda: st.one_of(
        st.just(SHIFT),
        st.builds(Lift, raw_substs),
        st.builds(Slash, raw_terms),
    )
)
raw_terms = st.deferred(
    lambda: st.one_of(
        st.builds(Index, st.integers(0, 4)),
        st.builds(Abs, raw_terms),
        st.builds(App, raw_terms, raw_terms),
        st.builds(Closure, raw_terms, raw_substs),
    )
)
ab_terms = st.deferred(
    lambda: st.one_of(
        st.builds(Index, st.integers(0, 4)),
        st.builds(Abs, ab_terms),
        st.builds(App, ab_terms, ab_terms),
        st.builds(Upd, ab_terms, st.integers(0, 3)),
        st.builds(Sub, ab_terms, ab_terms, st.integers(0, 3)),
    )
)

SK = parse_plain(r"(\\\(2 0 (1 0))) (\\1)")


def step_root(src, expected, rule, system=step_raw):
    term, name = system(parse_upsilon(src), ())
    assert name == rule
    assert term == parse_upsilon(expected)


def test_the_eight_raw_rules():
    step_root(r"(\0) 1", "0 [1 /]", "B")
    step_root("(0 1) [!]", "0 [!] (1 [!])", "App")
    step_root(r"(\0) [!]", r"\0 [^^ !]", "Lambda")
    step_root("0 [2 /]", "2", "FVar")
    step_root("3 [2 /]", "2", "RVar")
    step_root("0 [^^ !]", "0", "FVarLift")
    step_root("2 [^^ 1 /]", "1 [1 /] [!]", "RVarLift")
    step_root("4 [!]", "5", "VarShift")


def test_the_twelve_abbreviated_rules():
    step_root(r"(\0) 1", "0 {1, 0}", "B_in", step_in)
    step_root("(0 1) ^ 2", "0 ^ 2 (1 ^ 2)", "App_upd", step_in)
    step_root("(0 1) {5, 2}", "0 {5, 2} (1 {5, 2})", "App_sub", step_in)
    step_root(r"(\0) ^ 1", r"\0 ^ 2", "Lambda_upd", step_in)
    step_root(r"(\0) {5, 1}", r"\0 {5, 2}", "Lambda_sub", step_in)
    step_root("0 {5, 0}", "5", "FVar_sub", step_in)
    step_root("3 {5, 0}", "2", "RVar_sub", step_in)
    step_root("0 {5, 2}", "0", "FVarLift_sub", step_in)
    step_root("3 {5, 2}", "2 {5, 1} ^ 0", "RVarLift_sub", step_in)
    step_root("0 ^ 2", "0", "FVarLift_upd", step_in)
    step_root("3 ^ 2", "2 ^ 1 ^ 0", "RVarLift_upd", step_in)
    step_root("3 ^ 0", "4", "VarShift_upd", step_in)


def test_step_errors():
    with pytest.raises(NoRedex):
        step_raw(Index(0), ())
    with pytest.raises(ValueError):
        step_raw(Index(0), (2,))


def test_leftmost_outermost_order():
    t = parse_upsilon(r"0 ((\1) 2)")
    assert find_first_redex(t, match_raw) == ((1,), "B")
    # outer redex wins over inner ones
    t = parse_upsilon(r"(\0) ((\1) 2)")
    assert find_first_redex(t, match_raw) == ((), "B")
    assert [p for p, _ in iter_redexes(t, match_raw)] == [(), (1,)]


@given(st.one_of(raw_terms, ab_terms))
def test_print_parse_roundtrip(t):
    assert parse_upsilon(print_upsilon(t)) == t


@given(raw_terms)
def test_raw_abbrev_raw_is_identity(t):
    assert raw_form(abbrev_form(t)) == t


@given(ab_terms)
def test_abbrev_raw_abbrev_is_identity(t):
    assert abbrev_form(raw_form(t)) == t


def test_conversion_golden():
    assert abbrev_form(parse_upsilon("0 [^^ ^^ !]")) == Upd(Index(0), 2)
    assert abbrev_form(parse_upsilon("0 [^^ 1 /]")) == Sub(Index(0), Index(1), 1)
    assert raw_form(Upd(Index(0), 1)) == parse_upsilon("0 [^^ !]")
    assert raw_form(Sub(Index(0), Index(1), 0)) == parse_upsilon("0 [1 /]")


def test_infer_golden():
    # substituting at an index the body actually uses
    t = parse_upsilon(r"0 {\0, 0}")
    typing = infer_upsilon(t)
    assert typing.ltype == ()
    assert typing.derivation.rule == "sub_in"
    # the shifted tail cases
    assert infer_upsilon(parse_upsilon("3 ^ 0")).ltype == (4,)
    assert infer_upsilon(parse_upsilon("0 ^ 2")).ltype == (0,)
    assert infer_upsilon(parse_upsilon("2 ^ 2")).ltype == (3,)
    # substitution at an unused index drops it, but still types the argument
    typing = infer_upsilon(parse_upsilon(r"1 {\0, 0}"))
    assert typing.ltype == (0,)
    assert typing.derivation.rule == "sub_out"
    with pytest.raises(AbsHeadMissing):
        infer_upsilon(parse_upsilon(r"1 {\\0, 0}"))
    with pytest.raises(MergeConflict):
        infer_upsilon(parse_upsilon("(0 1) {0, 0}"))
    # closures type exactly as their abbreviated spelling
    assert infer_upsilon(parse_upsilon("3 [!]")).ltype == (4,)


def test_preservation_single_steps():
    t = parse_upsilon(r"(\\(1 0)) (\0)")
    report = check_preservation_step(t, ())
    assert report.rule == "B_in"
    assert report.before == report.after == ()
    # the argument is dropped, so its type does not contribute
    report = check_preservation_step(parse_upsilon("3 {5, 0}"), ())
    assert report.before == report.after == (2,)


def test_normalize_raw_golden():
    nf, steps = normalize_raw(parse_plain(r"\0"))
    assert nf == parse_plain(r"\0") and steps == 0
    nf, steps = normalize_raw(parse_plain(r"(\0) (\0)"))
    assert nf == parse_plain(r"\0") and steps == 2
    nf, steps = normalize_raw(SK)
    assert nf == parse_plain(r"\\0") and steps > 0


def test_normalize_rule_names_come_from_the_inventory():
    from nameless.upsilon import IN_RULE_NAMES, RAW_RULE_NAMES

    seen = []
    normalize_raw(SK, on_step=lambda n, rule, path, t: seen.append(rule))
    assert seen and set(seen) <= set(RAW_RULE_NAMES)
    seen = []
    normalize_in(SK, on_step=lambda n, rule, path, t: seen.append(rule))
    assert seen and set(seen) <= set(IN_RULE_NAMES)


def test_normalize_in_agrees_on_sk():
    assert normalize_in(SK)[0] == parse_plain(r"\\0")


def test_fuel_exhaustion():
    omega = parse_plain(r"(\(0 0)) (\(0 0))")
    with pytest.raises(FuelExhausted):
        normalize_raw(omega, fuel=50)


def test_projection():
    assert from_raw(to_raw(SK)) == SK
    with pytest.raises(ClosureRemains):
        from_raw(parse_upsilon("0 [!]"))
    with pytest.raises(TypeError):
        to_raw(parse_upsilon("0 [!]"))


def test_pipeline_golden():
    assert normalize_lin_pipeline(SK) == parse_plain(r"\\0")
    assert normalize_lin_pipeline(parse_plain(r"\0")) == parse_plain(r"\0")
    assert normalize_lin_pipeline(parse_plain(r"(\0) (\\(1 0))")) == parse_plain(
        r"\\(1 0)"
    )


def test_pipeline_handles_untypable_input():
    # the final restricted-term check is a Maybe, not a gate: terms with no
    # list type still normalize (SK itself is one of them)
    assert normalize_lin_pipeline(parse_plain(r"\\0")) == parse_plain(r"\\0")
    assert normalize_lin_pipeline(parse_plain(r"\(0 2)")) == parse_plain(r"\(0 2)")
    omega_free = parse_plain(r"(\0) (0 0)")
    assert normalize_lin_pipeline(omega_free) == parse_plain("0 0")
