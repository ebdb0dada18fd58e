import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from beliefcond import (
    Label,
    LabelScale,
    ScaleMismatchError,
    label_add,
    label_div_scalar,
    label_mul,
    label_sum,
    label_to_unit,
)
from beliefcond.errors import DomainError, EmptyInputError

L6 = LabelScale(6)

# Rows/columns L0..L6, transcribed cell by cell from the published tables.
ADDITION_TABLE = [
    [0, 1, 2, 3, 4, 5, 6],
    [1, 2, 3, 4, 5, 6, 6],
    [2, 3, 4, 5, 6, 6, 6],
    [3, 4, 5, 6, 6, 6, 6],
    [4, 5, 6, 6, 6, 6, 6],
    [5, 6, 6, 6, 6, 6, 6],
    [6, 6, 6, 6, 6, 6, 6],
]
MULTIPLICATION_TABLE = [
    [0, 0, 0, 0, 0, 0, 0],
    [0, 1, 1, 1, 1, 1, 1],
    [0, 1, 2, 2, 2, 2, 2],
    [0, 1, 2, 3, 3, 3, 3],
    [0, 1, 2, 3, 4, 4, 4],
    [0, 1, 2, 3, 4, 5, 5],
    [0, 1, 2, 3, 4, 5, 6],
]


@pytest.mark.parametrize("i,j", list(itertools.product(range(7), repeat=2)))
def test_addition_table(i, j):
    assert label_add(L6(i), L6(j)) == L6(ADDITION_TABLE[i][j])


@pytest.mark.parametrize("i,j", list(itertools.product(range(7), repeat=2)))
def test_multiplication_table(i, j):
    assert label_mul(L6(i), L6(j)) == L6(MULTIPLICATION_TABLE[i][j])


def test_add_examples():
    assert L6(2) + L6(3) == L6(5)
    assert L6(3) + L6(4) == L6(6)
    for k in range(7):
        assert L6(0) + L6(k) == L6(k)


def test_mul_examples():
    assert L6(2) * L6(3) == L6(2)
    assert L6(6) * L6(6) == L6(6)
    for k in range(7):
        assert L6(0) * L6(k) == L6(0)


def test_division_examples():
    assert label_div_scalar(L6(5), 3) == L6(1)
    assert label_div_scalar(L6(6), 3) == L6(2)
    for k in range(7):
        assert L6(k) // 1 == L6(k)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        label_div_scalar(L6(3), 0)
    with pytest.raises(DomainError):
        label_div_scalar(L6(3), -1)


def test_sum():
    total = label_sum([L6(1), L6(1), L6(4)])
    assert total.label == L6(6) and total.raw_index_sum == 6
    assert label_sum([L6(0), L6(0)]).label == L6(0)
    total = label_sum([L6(4), L6(4)])
    assert total.label == L6(6) and total.raw_index_sum == 8
    with pytest.raises(EmptyInputError):
        label_sum([])


def test_unit_interval():
    assert label_to_unit(L6(3)) == Fraction(1, 2)
    assert label_to_unit(L6(0)) == 0
    assert label_to_unit(L6(6)) == 1


def test_scale_mismatch():
    other = LabelScale(4)
    with pytest.raises(ScaleMismatchError):
        label_add(L6(1), other(1))
    with pytest.raises(ScaleMismatchError):
        label_mul(L6(1), other(1))
    with pytest.raises(ScaleMismatchError):
        L6(1) < other(2)


def test_invalid_labels():
    with pytest.raises(DomainError):
        Label(7, L6)
    with pytest.raises(DomainError):
        LabelScale(0)
    assert L6.parse("L4") == L6(4) and L6.parse("L_4") == L6(4)
    with pytest.raises(DomainError):
        L6.parse("4")


def test_order():
    assert sorted([L6(3), L6(0), L6(5)]) == [L6(0), L6(3), L6(5)]
    assert L6(2) <= L6(2) < L6(3)


@pytest.mark.parametrize("top", range(1, 13))
def test_algebra_laws_exhaustive(top):
    scale = LabelScale(top)
    labels = list(scale)
    for a, b in itertools.product(labels, repeat=2):
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b).index <= top
        assert a * a == a
    for a, b, c in itertools.product(labels, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        if b <= c:
            assert a + b <= a + c
            assert a * b <= a * c
    for a in labels:
        assert a + scale.bottom == a
        assert a * scale.top == a
        assert a * scale.bottom == scale.bottom


@given(st.integers(0, 40), st.integers(1, 45))
def test_division_bounds(index, j):
    a = LabelScale(40)(index)
    q = label_div_scalar(a, j).index
    assert j * q <= index < j * (q + 1)
