"""Parsing, printing, and the structural oracles for plain terms."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nameless.terms import (
    Abs,
    App,
    Index,
    ParseError,
    free_indices,
    is_closed_linear_structural,
    occurrence_profile,
    parse_plain,
    path_text,
    print_plain,
    term_size,
    tokenize,
)

plain_terms = st.deferred(
    lambda: st.one_of(
        st.builds(Index, st.integers(0, 5)),
        st.builds(Abs, plain_terms),
        st.builds(App, plain_terms, plain_terms),
    )
)


def test_parse_golden():
    assert parse_plain("0") == Index(0)
    assert parse_plain(r"\\(1 0)") == Abs(Abs(App(Index(1), Index(0))))
    assert parse_plain("2 0 (1 0)") == App(
        App(Index(2), Index(0)), App(Index(1), Index(0))
    )
    assert parse_plain(r"(\0) (\0)") == App(Abs(Index(0)), Abs(Index(0)))
    assert parse_plain("λλ(1 0)") == parse_plain(r"\\(1 0)")
    assert parse_plain("10") == Index(10)
    assert parse_plain("1 0") == App(Index(1), Index(0))
    assert parse_plain(r"\0 1") == Abs(App(Index(0), Index(1)))


def test_parse_errors_carry_byte_offsets():
    with pytest.raises(ParseError) as e:
        parse_plain("")
    assert e.value.offset == 0
    with pytest.raises(ParseError) as e:
        parse_plain("1 )")
    assert e.value.offset == 2
    with pytest.raises(ParseError) as e:
        parse_plain("(0")
    assert e.value.offset == 2 and e.value.found == "end of input"
    with pytest.raises(ParseError) as e:
        parse_plain("λ")  # two bytes in UTF-8
    assert e.value.offset == 2
    with pytest.raises(ParseError):
        parse_plain("0 ?")


def test_print_golden():
    sk_fun = Abs(Abs(Abs(App(App(Index(2), Index(0)), App(Index(1), Index(0))))))
    assert print_plain(sk_fun) == r"\\\(2 0 (1 0))"
    assert print_plain(App(Abs(Index(0)), Abs(Index(0)))) == r"(\0) (\0)"
    assert print_plain(App(App(Index(2), Index(0)), App(Index(1), Index(0)))) == "2 0 (1 0)"
    assert print_plain(Abs(App(Index(0), Index(1)))) == r"\(0 1)"


@given(plain_terms)
def test_print_parse_roundtrip(t):
    assert parse_plain(print_plain(t)) == t


def test_tokenize_kinds():
    kinds = [tok.kind for tok in tokenize(r"0 ^^ ^ ! { } [ ] , / _ era")]
    assert kinds == [
        "NUM", "DCARET", "CARET", "BANG", "LB", "RB",
        "LK", "RK", "COMMA", "SLASH", "UNDER", "IDENT", "END",
    ]


def test_occurrence_profile():
    t = parse_plain(r"\\(1 0)")
    assert occurrence_profile(t).binder_counts == (1, 1)
    assert occurrence_profile(t).free == ()
    t = parse_plain(r"\(0 5 2)")
    assert occurrence_profile(t).binder_counts == (1,)
    assert occurrence_profile(t).free == (1, 4)
    t = parse_plain(r"\\0")
    assert occurrence_profile(t).binder_counts == (0, 1)
    assert free_indices(parse_plain("0 0")) == (0, 0)


def test_is_closed_linear_structural():
    assert is_closed_linear_structural(parse_plain(r"\0"))
    assert is_closed_linear_structural(parse_plain(r"\\(1 0)"))
    assert is_closed_linear_structural(parse_plain(r"\\(0 1)"))
    assert not is_closed_linear_structural(parse_plain(r"\\0"))
    assert not is_closed_linear_structural(parse_plain(r"\(0 0)"))
    assert not is_closed_linear_structural(parse_plain("0"))


def test_term_size():
    assert term_size(Index(4)) == 1
    assert term_size(parse_plain(r"\0")) == 2
    assert term_size(parse_plain(r"\\\(2 0 (1 0))")) == 10


def test_path_text():
    assert path_text(()) == "-"
    assert path_text((0, 1, 0)) == "0.1.0"
