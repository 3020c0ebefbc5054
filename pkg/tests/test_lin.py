"""List-type inference for restricted terms and the closed-linear enumerator."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nameless.lin import (
    AbsHeadMissing,
    enumerate_closed_linear,
    infer_lin,
    is_closed_linear_typed,
    is_lin,
)
from nameless.ltypes import MergeConflict
from nameless.terms import (
    Abs,
    App,
    CapExceeded,
    Index,
    is_closed_linear_structural,
    parse_plain,
    print_plain,
    term_size,
)

plain_terms = st.deferred(
    lambda: st.one_of(
        st.builds(Index, st.integers(0, 5)),
        st.builds(Abs, plain_terms),
        st.builds(App, plain_terms, plain_terms),
    )
)


def test_infer_golden():
    assert infer_lin(parse_plain(r"\\(1 0)")).ltype == ()
    assert infer_lin(parse_plain(r"\(0 5 2)")).ltype == (1, 4)
    assert infer_lin(Index(3)).ltype == (3,)
    assert infer_lin(parse_plain(r"\(0 2)")).ltype == (1,)


def test_infer_failures():
    with pytest.raises(MergeConflict) as e:
        infer_lin(parse_plain("2 0 (1 0)"))
    assert e.value.index == 0
    with pytest.raises(AbsHeadMissing):
        infer_lin(parse_plain(r"\\0"))
    with pytest.raises(MergeConflict):
        infer_lin(parse_plain(r"\(0 0)"))


def test_derivation_text():
    typing = infer_lin(parse_plain(r"\\(1 0)"))
    assert list(typing.derivation.lines(print_plain)) == [
        "abs : \\\\(1 0) : []",
        "  abs : \\(1 0) : [0]",
        "    app : 1 0 : [0,1]",
        "      ind : 1 : [1]",
        "      ind : 0 : [0]",
    ]


def test_is_lin():
    assert is_lin(parse_plain(r"\(0 5 2)"))
    assert not is_lin(parse_plain(r"\\0"))
    assert is_closed_linear_typed(parse_plain(r"\\(1 0)"))
    assert not is_closed_linear_typed(parse_plain(r"\(0 2)"))


@given(plain_terms)
def test_empty_type_characterizes_closed_linear(t):
    assert is_closed_linear_typed(t) == is_closed_linear_structural(t)


def test_enumerate_golden():
    assert enumerate_closed_linear(2) == [Abs(Index(0))]
    five = enumerate_closed_linear(5)
    assert len(five) == 6
    assert parse_plain(r"\\(1 0)") in five
    assert parse_plain(r"\\(0 1)") in five


def test_enumerate_counts_and_sizes():
    terms = enumerate_closed_linear(9)
    assert len(terms) == 66
    assert sorted(set(term_size(t) for t in terms)) == [2, 5, 8]
    assert len(set(terms)) == len(terms)
    assert terms == enumerate_closed_linear(9)
    for t in terms:
        assert is_closed_linear_structural(t)
        assert infer_lin(t).ltype == ()


def test_enumerate_matches_brute_force():
    # independent oracle: every bounded-index plain term, filtered structurally
    def all_terms(size, depth):
        if size == 1:
            return [Index(n) for n in range(depth + 1)]
        out = [Abs(b) for b in all_terms(size - 1, depth + 1)]
        for s1 in range(1, size - 1):
            for f in all_terms(s1, depth):
                for a in all_terms(size - 1 - s1, depth):
                    out.append(App(f, a))
        return out

    brute = set()
    for size in range(1, 9):
        brute.update(t for t in all_terms(size, -1) if is_closed_linear_structural(t))
    assert brute == set(enumerate_closed_linear(8))


def test_enumerate_cap():
    with pytest.raises(CapExceeded):
        enumerate_closed_linear(12)
