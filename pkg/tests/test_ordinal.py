import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walker.ordinal import (
    INFINITY,
    OMEGA,
    Ordinal,
    OrdinalParseError,
    Underflow,
    add,
    cmp,
    is_finite,
    is_limit,
    left_sub,
    ordinal,
    parse_ordinal,
    successor,
)

w = OMEGA


def O(text):
    return parse_ordinal(text)


def test_cmp_examples():
    assert cmp(w, 5) > 0
    assert cmp(O("w*2+1"), O("w*2+1")) == 0
    assert cmp(O("w^2"), O("w*9+7")) > 0


def test_add_examples():
    assert add(1, w) == w
    assert add(w, 1) == O("w+1")
    assert add(O("w*2+3"), w) == O("w*3")


def test_left_sub_examples():
    assert left_sub(w, O("w*2")) == w
    assert left_sub(3, w) == w
    assert left_sub(O("w+1"), O("w+4")) == 3
    with pytest.raises(Underflow):
        left_sub(w, 5)


def test_limit_and_successor():
    assert is_limit(w)
    assert not is_limit(O("w+1"))
    assert not is_limit(0)
    assert successor(O("w*2")) == O("w*2+1")
    assert is_finite(7) and is_finite(0) and not is_finite(w)


def test_finite_ordinals_behave_like_ints():
    assert Ordinal.from_int(4) == 4
    assert hash(Ordinal.from_int(4)) == hash(4)
    assert int(O("12")) == 12
    assert sorted([w, 3, O("w^2"), 0]) == [0, 3, w, O("w^2")]


def test_infinity_sentinel_is_above_everything():
    assert INFINITY > O("w^(w+1)*3")
    assert not INFINITY < 10**9


@pytest.mark.parametrize(
    "text",
    ["0", "7", "w", "w*3", "w^2", "w^2*3 + w + 4", "w^w", "w^(w+1)*2 + w^3", "w^(w^w)"],
)
def test_round_trip(text):
    x = O(text)
    assert O(str(x)) == x
    assert str(O(str(x))) == str(x)


def test_printer_is_canonical():
    assert str(O(" w ^ 2 * 3+w+ 4 ")) == "w^2*3 + w + 4"
    assert str(O("w*1")) == "w"
    assert str(O("3 + w")) == "w"


@pytest.mark.parametrize("text,pos", [("", 0), ("w+", 2), ("w*", 2), ("2x", 1), ("w^(1", 4)])
def test_parse_errors_carry_positions(text, pos):
    with pytest.raises(OrdinalParseError) as info:
        O(text)
    assert info.value.pos == pos


def test_coercion():
    assert ordinal("w+2") == O("w+2")
    assert ordinal(3) == 3


# -- randomized identities ------------------------------------------------


def ordinals(depth=2):
    if depth == 0:
        return st.integers(0, 6).map(Ordinal.from_int)
    sub = ordinals(depth - 1)
    term = st.tuples(sub, st.integers(1, 4))
    return st.lists(term, max_size=3).map(
        lambda ts: Ordinal.from_int(0) if not ts else sum_terms(ts)
    )


def sum_terms(ts):
    out = Ordinal.from_int(0)
    for exp, c in ts:
        out = add(out, Ordinal.omega_power(exp, c))
    return out


@settings(max_examples=300, deadline=None)
@given(ordinals(), ordinals(), ordinals())
def test_add_associative(a, b, c):
    assert add(add(a, b), c) == add(a, add(b, c))


@settings(max_examples=300, deadline=None)
@given(ordinals(), ordinals())
def test_left_sub_inverts_add(a, b):
    assert left_sub(a, add(a, b)) == b


@settings(max_examples=300, deadline=None)
@given(ordinals(), ordinals(), ordinals())
def test_total_order(a, b, c):
    assert cmp(a, b) == -cmp(b, a)
    if cmp(a, b) <= 0 and cmp(b, c) <= 0:
        assert cmp(a, c) <= 0
    assert (cmp(a, b) == 0) == (a == b)
    assert add(a, b) >= a


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_finite_agrees_with_int(m, n):
    assert add(m, n) == m + n
    assert cmp(m, n) == (m > n) - (m < n)


@settings(max_examples=200, deadline=None)
@given(ordinals(3))
def test_parse_print_round_trip(a):
    assert parse_ordinal(str(a)) == a
