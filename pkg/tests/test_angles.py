"""Exact circle arithmetic: normalization, doubling, distances, cyclic order."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quaddyn.angles import (
    Angle,
    circle_distance,
    cyclic_sort,
    double,
    halve_preimages,
    parse_angles,
)
from quaddyn.errors import InvariantError


def test_normalization_wraps_into_unit_interval():
    assert Angle(7, 7) == Angle(0)
    assert Angle(-1, 3) == Angle(2, 3)
    assert Angle(Fraction(9, 4)).fraction == Fraction(1, 4)


def test_parse_accepts_fraction_and_decimal_literals():
    assert Angle.parse("3/7") == Angle(3, 7)
    assert Angle.parse("0.375") == Angle(3, 8)
    assert Angle.parse(" 5/3 ") == Angle(2, 3)


def test_parse_rejects_garbage():
    with pytest.raises(InvariantError):
        Angle.parse("one third")
    with pytest.raises(InvariantError):
        Angle.parse("1/0")


def test_double_and_preimages_are_inverse():
    a = Angle(3, 7)
    assert double(a) == Angle(6, 7)
    lo, hi = halve_preimages(a)
    assert double(lo) == a
    assert double(hi) == a
    assert circle_distance(lo, hi) == Fraction(1, 2)


def test_circle_distance_symmetric_and_bounded():
    rng = random.Random(7)
    for _ in range(200):
        a = Angle(rng.randrange(0, 64), 64)
        b = Angle(rng.randrange(1, 97), 97)
        d = circle_distance(a, b)
        assert d == circle_distance(b, a)
        assert 0 <= d <= Fraction(1, 2)


def test_circle_distance_wraps_around_zero():
    assert circle_distance(Angle(1, 16), Angle(15, 16)) == Fraction(1, 8)


def test_cyclic_sort_is_rotation_invariant():
    angles = [Angle(5, 7), Angle(1, 7), Angle(4, 7), Angle(2, 7)]
    base = cyclic_sort(angles)
    assert base == cyclic_sort(angles[2:] + angles[:2])
    fracs = [a.fraction for a in base]
    assert fracs == sorted(fracs)


def test_parse_angles_batch():
    parsed = parse_angles(["1/3", "2/3"])
    assert parsed == [Angle(1, 3), Angle(2, 3)]


@given(st.fractions(min_value=0, max_value=1))
def test_preimages_always_double_back(frac):
    a = Angle(frac)
    for pre in halve_preimages(a):
        assert double(pre) == a


@given(
    st.fractions(min_value=0, max_value=1),
    st.fractions(min_value=0, max_value=1),
    st.fractions(min_value=0, max_value=1),
)
def test_circle_distance_triangle_inequality(x, y, z):
    a, b, c = Angle(x), Angle(y), Angle(z)
    assert circle_distance(a, c) <= circle_distance(a, b) + circle_distance(b, c)
