from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from onlinend.rational import floor_log2, fmt, frac, parse, pow2


def test_frac_accepts_exact_inputs_only():
    assert frac(3) == 3
    assert frac("7/4") == F(7, 4)
    with pytest.raises(TypeError):
        frac(0.5)
    with pytest.raises(TypeError):
        frac(True)


def test_fmt_parse_round_trip_and_infinity():
    assert fmt(F(6, 4)) == "3/2"
    assert fmt(5) == "5"
    assert parse("inf") == float("inf")
    assert fmt(float("inf")) == "inf"


@given(st.fractions(min_value=F(1, 10 ** 6), max_value=F(10 ** 6)))
def test_floor_log2_brackets(x):
    k = floor_log2(x)
    assert pow2(k) <= x < pow2(k + 1)


def test_floor_log2_small_values():
    assert floor_log2(4) == 2
    assert floor_log2(1) == 0
    assert floor_log2(F(1, 2)) == -1
    assert floor_log2(F(3, 4)) == -1
    with pytest.raises(ValueError):
        floor_log2(0)
