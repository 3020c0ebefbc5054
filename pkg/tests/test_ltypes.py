"""Golden values and algebraic laws for the sorted-list algebra."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nameless.ltypes import (
    AtLeast,
    DecrementZero,
    Derivation,
    GreaterThan,
    LessThan,
    MergeConflict,
    RIndex,
    compare_rindex,
    decrement,
    filter_ltype,
    increment,
    index_text,
    is_ltype,
    level,
    ltype_text,
    merge,
)

nat_ltypes = st.lists(st.integers(0, 20), unique=True, max_size=8).map(
    lambda xs: tuple(sorted(xs))
)
rindexes = st.builds(RIndex, st.integers(0, 5), st.text(alphabet="01", max_size=3))
r_ltypes = st.lists(rindexes, unique_by=lambda r: r.key(), max_size=6).map(
    lambda xs: tuple(sorted(xs, key=lambda r: r.key()))
)
any_ltypes = nat_ltypes | r_ltypes
# merges only ever see lists from one index domain
ltype_pairs = st.tuples(nat_ltypes, nat_ltypes) | st.tuples(r_ltypes, r_ltypes)


def test_merge_golden():
    assert merge((2,), (0,)) == (0, 2)
    assert merge((), (1, 3)) == (1, 3)
    assert merge((0, 2), (1, 5)) == (0, 1, 2, 5)


def test_merge_conflict_carries_smallest_shared_index():
    with pytest.raises(MergeConflict) as e:
        merge((0, 2), (0, 1))
    assert e.value.index == 0
    with pytest.raises(MergeConflict) as e:
        merge((1, 4, 6), (2, 4, 6))
    assert e.value.index == 4


def test_decrement_golden():
    assert decrement((2, 5)) == (1, 4)
    assert decrement(()) == ()
    with pytest.raises(DecrementZero):
        decrement((0, 3))


def test_increment_golden():
    assert increment((3, 4)) == (4, 5)
    assert increment((1,), 3) == (4,)
    assert increment((0, 7), 0) == (0, 7)


def test_filters_golden():
    l = (0, 2, 3, 4)
    assert filter_ltype(LessThan(3), l) == (0, 2)
    assert filter_ltype(GreaterThan(2), l) == (3, 4)
    assert filter_ltype(AtLeast(3), l) == (3, 4)
    assert filter_ltype(LessThan(0), l) == ()


def test_predicate_text():
    assert str(LessThan(3)) == "<3"
    assert str(GreaterThan(0)) == ">0"
    assert str(AtLeast(2)) == ">=2"


def test_rindex_order_chain():
    chain = [
        RIndex(0, ""),
        RIndex(0, "0"),
        RIndex(0, "00"),
        RIndex(0, "01"),
        RIndex(0, "1"),
        RIndex(1, ""),
    ]
    for a, b in zip(chain, chain[1:]):
        assert compare_rindex(a, b) == -1
        assert a < b
    assert compare_rindex(RIndex(2, "10"), RIndex(2, "10")) == 0


def test_rindex_order_is_total_and_transitive():
    # bounded exhaustive check: every pair is exactly one of <, =, >
    paths = ["", "0", "1", "00", "01", "10", "11"]
    domain = [RIndex(d, p) for d in range(3) for p in paths]
    for a in domain:
        for b in domain:
            signs = (compare_rindex(a, b), compare_rindex(b, a))
            assert signs in ((-1, 1), (1, -1), (0, 0))
    import random

    rng = random.Random(0)
    for _ in range(2000):
        a, b, c = (rng.choice(domain) for _ in range(3))
        if compare_rindex(a, b) <= 0 and compare_rindex(b, c) <= 0:
            assert compare_rindex(a, c) <= 0


def test_rindex_validation():
    with pytest.raises(ValueError):
        RIndex(-1, "")
    with pytest.raises(ValueError):
        RIndex(0, "012")


def test_rindex_algebra():
    assert level(RIndex(2, "01")) == 2
    assert level(7) == 7
    assert decrement((RIndex(1, "0"),)) == (RIndex(0, "0"),)
    with pytest.raises(DecrementZero):
        decrement((RIndex(0, "1"),))
    assert increment((RIndex(0, "1"),)) == (RIndex(1, "1"),)
    assert merge((RIndex(0, "0"),), (RIndex(0, "1"),)) == (
        RIndex(0, "0"),
        RIndex(0, "1"),
    )
    with pytest.raises(MergeConflict):
        merge((RIndex(0, "0"),), (RIndex(0, "0"),))
    got = filter_ltype(LessThan(1), (RIndex(0, "0"), RIndex(0, "1"), RIndex(1, "")))
    assert got == (RIndex(0, "0"), RIndex(0, "1"))


def test_display():
    assert ltype_text(()) == "[]"
    assert ltype_text((0, 2, 5)) == "[0,2,5]"
    assert ltype_text((RIndex(0, "01"), RIndex(1, ""))) == "[(0,01),(1,e)]"
    assert index_text(RIndex(0, "")) == "(0,e)"
    assert str(RIndex(1, "01")) == "1_01"
    assert str(RIndex(2, "")) == "2"


def test_is_ltype():
    assert is_ltype(())
    assert is_ltype((0, 3, 7))
    assert not is_ltype((3, 0))
    assert not is_ltype((1, 1))
    assert is_ltype((RIndex(0, ""), RIndex(0, "0")))
    assert not is_ltype((RIndex(0, "0"), RIndex(0, "")))


def test_derivation_lines():
    leaf = Derivation("ind", "0", (0,))
    root = Derivation("abs", "\\0", (), (leaf,))
    assert list(root.lines(str)) == ["abs : \\0 : []", "  ind : 0 : [0]"]


@given(ltype_pairs)
def test_merge_is_commutative(pair):
    l1, l2 = pair
    try:
        left = merge(l1, l2)
    except MergeConflict as e:
        with pytest.raises(MergeConflict) as other:
            merge(l2, l1)
        assert other.value.index == e.index
        return
    assert merge(l2, l1) == left
    assert is_ltype(left)


@given(nat_ltypes, nat_ltypes, nat_ltypes)
def test_merge_is_associative(l1, l2, l3):
    def try_merge(a, b):
        try:
            return merge(a, b)
        except MergeConflict:
            return None

    left = try_merge(l1, l2)
    left = try_merge(left, l3) if left is not None else None
    right = try_merge(l2, l3)
    right = try_merge(l1, right) if right is not None else None
    # definedness coincides because both demand pairwise disjointness
    assert left == right


@given(any_ltypes)
def test_increment_then_decrement_is_identity(l):
    assert decrement(increment(l)) == l


@given(nat_ltypes, st.integers(0, 8))
def test_filter_split_reassembles(l, i):
    assert merge(filter_ltype(LessThan(i), l), filter_ltype(AtLeast(i), l)) == l


@given(nat_ltypes, st.integers(0, 8))
def test_filter_at_least_is_greater_than_predecessor(l, i):
    assert filter_ltype(AtLeast(i + 1), l) == filter_ltype(GreaterThan(i), l)
