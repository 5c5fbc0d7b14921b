"""Doubling-map orbit search, rotation numbers, landing pairs, and the
convergent-Cauchy external angle."""

from fractions import Fraction

import pytest

from quaddyn.angles import Angle, circle_distance, double
from quaddyn.cardioid import (
    external_angle,
    find_orbit,
    landing_pair,
    rotation_number,
    scan_orbits,
)
from quaddyn.cfrac import CFExpansion, cf_expand
from quaddyn.errors import InvariantError

GOLDEN = CFExpansion((), (1,))


def _angle_set(orbit):
    return {a.fraction for a in orbit.angles}


def test_find_orbit_known_cycles():
    assert _angle_set(find_orbit(1, 2)) == {Fraction(1, 3), Fraction(2, 3)}
    assert _angle_set(find_orbit(2, 3)) == {Fraction(3, 7), Fraction(5, 7), Fraction(6, 7)}
    assert _angle_set(find_orbit(1, 3)) == {Fraction(1, 7), Fraction(2, 7), Fraction(4, 7)}


def test_orbit_is_closed_under_doubling():
    orbit = find_orbit(3, 7)
    angles = set(orbit.angles)
    for a in angles:
        assert double(a) in angles
        assert a.denominator == 2**7 - 1 or (2**7 - 1) % a.denominator == 0


def test_find_orbit_rejects_bad_input():
    for p, q in ((0, 3), (3, 3), (2, 4), (4, 2)):
        with pytest.raises(InvariantError):
            find_orbit(p, q)


def test_rotation_number_examples():
    assert rotation_number([Angle(1, 3), Angle(2, 3)]) == Fraction(1, 2)
    assert rotation_number([Angle(1, 7), Angle(2, 7), Angle(4, 7)]) == Fraction(1, 3)
    assert rotation_number([Angle(3, 7), Angle(5, 7), Angle(6, 7)]) == Fraction(2, 3)


def test_rotation_number_ignores_input_order():
    shuffled = [Angle(6, 7), Angle(3, 7), Angle(5, 7)]
    assert rotation_number(shuffled) == Fraction(2, 3)


def test_rotation_number_rejects_non_cycles():
    with pytest.raises(InvariantError):
        rotation_number([Angle(1, 3), Angle(1, 7)])


@pytest.mark.parametrize(
    "p,q,expected",
    [
        (1, 2, (Fraction(1, 3), Fraction(2, 3))),
        (2, 3, (Fraction(5, 7), Fraction(6, 7))),
        (3, 5, (Fraction(21, 31), Fraction(22, 31))),
    ],
)
def test_landing_pair_reference_values(p, q, expected):
    lo, hi = landing_pair(p, q)
    assert (lo.fraction, hi.fraction) == expected


def test_landing_gap_is_strict_minimum():
    for p, q in ((1, 3), (2, 5), (3, 7), (5, 8)):
        orbit = find_orbit(p, q)
        lo, hi = landing_pair(p, q)
        gap = circle_distance(lo, hi)
        others = [
            circle_distance(a, b)
            for i, a in enumerate(orbit.angles)
            for b in orbit.angles[i + 1 :]
            if {a, b} != {lo, hi}
        ]
        assert all(gap < other for other in others)


def test_orbit_uniqueness_small_denominators():
    # Exhaustive scan: exactly one cycle per coprime rotation number.
    for q in range(2, 9):
        found = scan_orbits(q)
        expected = {
            Fraction(p, q)
            for p in range(1, q)
            if Fraction(p, q).denominator == q
        }
        assert set(found) == expected
        assert all(len(orbits) == 1 for orbits in found.values())


def test_external_angle_golden_iterates():
    result = external_angle(GOLDEN, 16)
    assert tuple(a.fraction for a in result.iterates[:3]) == (
        Fraction(1, 3),
        Fraction(5, 7),
        Fraction(21, 31),
    )
    assert result.bound == Fraction(1, 2**15)
    assert result.approx.denominator % 2 == 1


def test_external_angle_outputs_are_cauchy():
    coarse = external_angle(GOLDEN, 12)
    fine = external_angle(GOLDEN, 20)
    assert circle_distance(coarse.approx, fine.approx) <= Fraction(2, 2**12)


def test_external_angle_rational_delegates_to_landing_pair():
    result = external_angle(cf_expand(Fraction(1, 2)), 16)
    assert result.exact_pair is not None
    lo, hi = result.exact_pair
    assert (lo.fraction, hi.fraction) == (Fraction(1, 3), Fraction(2, 3))


def test_external_angle_stopping_rule_consistency():
    # Successive kept iterates must differ by less than the requested gap.
    result = external_angle(GOLDEN, 16)
    last_two = result.iterates[-2:]
    assert circle_distance(last_two[0], last_two[1]) < Fraction(1, 2**16)
