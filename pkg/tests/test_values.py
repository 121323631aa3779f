import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abcalc.errors import EvalFault
from abcalc.operators import RELATIONS, apply_operator
from abcalc.values import (
    UNDEF, decode_value, encode_value, format_value, kind, value_eq, value_key,
)
from abcalc.parser import parse_value

values = st.recursive(
    st.one_of(st.integers(-5, 5), st.booleans(), st.text("abz ", max_size=3), st.just(UNDEF)),
    lambda inner: st.one_of(st.lists(inner, max_size=3).map(tuple),
                            st.frozensets(inner.filter(lambda v: v is not UNDEF), max_size=3)),
    max_leaves=6,
)


def test_bool_and_int_are_distinct_values():
    assert not value_eq(True, 1)
    assert not value_eq(False, 0)
    assert value_key(True) != value_key(1)


def test_undef_is_a_singleton():
    assert type(UNDEF)() is UNDEF
    assert kind(UNDEF) == "undef"
    assert format_value(UNDEF) == "undef"


def test_format_values():
    assert format_value(True) == "tt"
    assert format_value(frozenset({3, 1})) == "{1, 3}"
    assert format_value(("a", 1)) == '<"a", 1>'


@settings(max_examples=1000, deadline=None)
@given(values)
def test_encode_decode_round_trip(v):
    assert value_eq(decode_value(encode_value(v)), v)


@settings(max_examples=1000, deadline=None)
@given(values)
def test_format_parse_round_trip(v):
    assert value_eq(parse_value(format_value(v)), v)


def test_decode_rejects_garbage():
    with pytest.raises(ValueError):
        decode_value({"float": 1.5})
    with pytest.raises(ValueError):
        decode_value([1])


def test_arithmetic_faults():
    assert apply_operator("+", [2, 3]) == 5
    with pytest.raises(EvalFault):
        apply_operator("+", [True, 1])
    with pytest.raises(EvalFault):
        apply_operator("%", [1, 0])
    with pytest.raises(EvalFault):
        apply_operator("+", [UNDEF, 1])
    with pytest.raises(EvalFault):
        apply_operator("nosuch", [])


def test_set_helpers():
    assert apply_operator("minex", [frozenset({0, 1, 3})]) == 2
    assert apply_operator("minex", [frozenset()]) == 0
    assert apply_operator("card", [frozenset({1, 2})]) == 2
    assert apply_operator("union", [frozenset({1}), frozenset({2})]) == frozenset({1, 2})
    assert apply_operator("rank", ["H"]) == 1 and apply_operator("rank", ["L"]) == 0


@settings(max_examples=1000, deadline=None)
@given(st.frozensets(st.integers(0, 6), max_size=6))
def test_minex_matches_brute_force(s):
    expected = next(i for i in range(10) if i not in s)
    assert apply_operator("minex", [s]) == expected


def test_relations():
    assert RELATIONS["in"](1, frozenset({1, 2}))
    assert not RELATIONS["in"](True, frozenset({1}))
    assert RELATIONS["notin"](3, frozenset({1, 2}))
    assert RELATIONS["<"]("a", "b")
    with pytest.raises(EvalFault):
        RELATIONS["<"](1, "b")
