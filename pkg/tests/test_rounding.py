import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from campcache import RatioContext, TraceRecord, distinct_bound, integerize, round_to_precision, rounded_ratio


def bitstring_round(x, p):
    # independent oracle: keep the leading p characters of the binary string
    s = bin(x)[2:]
    if len(s) <= p:
        return x
    return int(s[:p] + "0" * (len(s) - p), 2)


def fraction_integerize(cost, size, max_size):
    v = Fraction(cost * max_size, size)
    n = int(v)
    if v - n >= Fraction(1, 2):
        n += 1
    return max(1, n)


@pytest.mark.parametrize("x,expected", [
    (0b101101011, 0b101100000),
    (0b001010011, 0b001010000),
    (0b000001010, 0b000001010),
    (0b000000111, 0b000000111),
])
def test_table_rows_precision_4(x, expected):
    assert round_to_precision(x, 4) == expected


def test_table_decimal_values():
    assert round_to_precision(363, 4) == 352
    assert round_to_precision(83, 4) == 80
    assert round_to_precision(10, 4) == 10
    assert round_to_precision(7, 4) == 7


def test_round_rejects_zero():
    with pytest.raises(ValueError):
        round_to_precision(0, 3)
    with pytest.raises(ValueError):
        round_to_precision(5, 0)


@given(st.integers(1, 2**64), st.integers(1, 70))
def test_round_matches_bitstring_oracle(x, p):
    assert round_to_precision(x, p) == bitstring_round(x, p)


@given(st.integers(1, 2**40), st.integers(1, 16))
def test_round_properties(x, p):
    r = round_to_precision(x, p)
    assert r <= x
    assert x * 2 ** (p - 1) <= (2 ** (p - 1) + 1) * r
    assert round_to_precision(r, p) == r
    assert len(bin(r)[2:].rstrip("0")) <= p


def test_round_monotone_small_range():
    for p in range(1, 7):
        prev = 0
        for x in range(1, 5000):
            r = round_to_precision(x, p)
            assert r >= prev
            prev = r


def test_integerize_examples():
    assert integerize(100, 50, 200) == 400
    assert integerize(1, 200, 200) == 1
    assert integerize(7, 3, 10) == 23
    assert integerize(0, 10, 10) == 1


def test_integerize_ties_round_away_from_zero():
    assert integerize(1, 2, 3) == 2  # 1.5
    assert integerize(5, 4, 2) == 3  # 2.5
    assert integerize(1, 4, 3) == 1  # 0.75


def test_integerize_matches_fraction_oracle():
    rng = random.Random(7)
    for _ in range(20_000):
        size = rng.randint(1, 2**20)
        max_size = rng.randint(size, 2**30)
        cost = rng.randint(0, 10**9)
        assert integerize(cost, size, max_size) == fraction_integerize(cost, size, max_size)


def test_rounded_ratio_first_record():
    ctx = RatioContext(precision=4)
    assert rounded_ratio(TraceRecord("a", 100, 100), ctx) == 96
    assert ctx.max_size_seen == 100


def test_rounded_ratio_unit():
    for p in (1, 3, 8, None):
        ctx = RatioContext(precision=p)
        assert rounded_ratio(TraceRecord("a", 1, 1), ctx) == 1


def test_unbounded_is_plain_integerize():
    rng = random.Random(3)
    ctx = RatioContext(precision=None)
    for _ in range(2000):
        size = rng.randint(1, 5000)
        cost = rng.randint(0, 10**6)
        got = rounded_ratio(TraceRecord("k", size, cost), ctx)
        assert got == integerize(cost, size, ctx.max_size_seen)


def test_max_size_non_decreasing():
    ctx = RatioContext(precision=5)
    seen = 1
    for size in [10, 3, 50, 50, 7, 1000, 2]:
        ctx.ratio(1, size)
        seen = max(seen, size)
        assert ctx.max_size_seen == seen


def test_rounded_ratio_has_at_most_p_bits():
    rng = random.Random(11)
    for p in range(1, 9):
        ctx = RatioContext(precision=p)
        for _ in range(500):
            c = ctx.ratio(rng.randint(0, 10**4), rng.randint(1, 10**5))
            assert c >= 1
            assert len(bin(c)[2:].rstrip("0")) <= p


def test_distinct_bound_small_exhaustive():
    for upper in (1, 2, 3, 7, 8, 100, 1000):
        for p in range(1, 6):
            xs = np.arange(1, upper + 1)
            count = len({round_to_precision(int(x), p) for x in xs})
            if upper.bit_length() >= p:
                assert count <= distinct_bound(upper, p)
