"""Allowed half circle, itinerary membership, finite covers, the dense orbit,
and the cyclic-order semiconjugacy test."""

from fractions import Fraction

import pytest

from quaddyn.angles import Angle
from quaddyn.cantor import (
    Membership,
    arcs_hausdorff,
    build_arc,
    cover,
    dense_orbit,
    membership,
    semiconjugacy_check,
)
from quaddyn.cfrac import CFExpansion, cf_expand
from quaddyn.errors import InvariantError

GOLDEN = CFExpansion((), (1,))
SILVER = CFExpansion((), (2,))


def _arc_distance(x, arcs):
    """Distance on the circle from a point to a union of closed arcs."""
    best = Fraction(1)
    for arc in arcs:
        rel = (x - arc.lo) % 1
        if rel <= arc.width:
            return Fraction(0)
        best = min(best, rel - arc.width, 1 - rel)
    return best


def test_arc_is_an_antipodal_half_circle():
    arc = build_arc(GOLDEN, prec=32)
    assert (arc.high.lo - arc.low.lo) % 1 == Fraction(1, 2)
    assert arc.high.width == arc.low.width


def test_arc_contains_alpha_bracket():
    arc = build_arc(GOLDEN, prec=32)
    assert arc.classify(arc.alpha.lo, arc.alpha.width) == 1


def test_arc_bracket_width_at_prec_20():
    arc = build_arc(GOLDEN, prec=20)
    assert arc.bracket_width <= Fraction(1, 2**19)


def test_arc_endpoints_double_to_the_same_point():
    arc = build_arc(GOLDEN, prec=40)
    assert (2 * arc.low.lo) % 1 == (2 * arc.high.lo) % 1
    doubled = (2 * arc.low.lo) % 1
    slack = 4 * arc.bracket_width
    assert arc.alpha.lo - slack <= doubled <= arc.alpha.hi + slack


def test_build_arc_input_validation():
    with pytest.raises(InvariantError):
        build_arc(cf_expand(Fraction(1, 3)), prec=32)
    with pytest.raises(InvariantError):
        build_arc(GOLDEN, prec=2)


def test_membership_alpha_bracket_inside():
    arc = build_arc(GOLDEN, prec=48)
    for depth in (0, 4, 16):
        assert membership(arc.alpha, arc, depth=depth) is Membership.INSIDE


def test_membership_complementary_midpoint_outside_at_depth_zero():
    arc = build_arc(GOLDEN, prec=48)
    comp_mid = (arc.low.lo + Fraction(3, 4) + arc.low.width / 2) % 1
    approx = Fraction(round(comp_mid * 2**20), 2**20)
    assert membership(Angle(approx), arc, depth=0) is Membership.OUTSIDE


def test_membership_first_iterate_exit_detected_at_depth_one():
    arc = build_arc(GOLDEN, prec=48)
    comp_mid = Fraction(round(((arc.low.lo + Fraction(3, 4)) % 1) * 2**20), 2**20)
    pre_a = comp_mid / 2
    pre_b = comp_mid / 2 + Fraction(1, 2)
    inside_pre = pre_a if arc.classify(pre_a) == 1 else pre_b
    assert arc.classify(inside_pre) == 1
    assert membership(Angle(inside_pre), arc, depth=0) is not Membership.OUTSIDE
    assert membership(Angle(inside_pre), arc, depth=1) is Membership.OUTSIDE


def test_membership_fixed_point_zero_outside():
    for cf in (GOLDEN, SILVER):
        arc = build_arc(cf, prec=48)
        assert membership(Angle(0), arc, depth=0) is Membership.OUTSIDE


def test_cover_depth_zero_is_single_arc():
    cov = cover(GOLDEN, 0)
    assert cov.depth == 0
    assert len(cov.arcs) == 1
    assert cov.arcs[0].width >= Fraction(1, 2)


def test_cover_depth_one_has_at_most_two_arcs():
    cov = cover(GOLDEN, 1)
    assert 1 <= len(cov.arcs) <= 2


def test_cover_arc_count_bound_and_bound_field():
    for depth in (2, 5, 8):
        cov = cover(GOLDEN, depth)
        assert len(cov.arcs) <= 2 ** (depth + 1)
        assert cov.hausdorff_bound == Fraction(1, 2**depth)


def test_cover_arcs_disjoint_and_sorted():
    cov = cover(GOLDEN, 8)
    for a, b in zip(cov.arcs, cov.arcs[1:]):
        assert a.hi < b.lo
    assert cov.arcs[-1].hi - cov.arcs[0].lo < 1


def test_cover_total_length_decreases():
    lengths = [cover(GOLDEN, d, prec=80).total_length() for d in (0, 2, 4, 6)]
    assert all(b < a for a, b in zip(lengths, lengths[1:]))


def test_cover_nesting_at_fixed_precision():
    coarse = cover(GOLDEN, 3, prec=80)
    fine = cover(GOLDEN, 4, prec=80)
    for arc in fine.arcs:
        assert any(c.lo <= arc.lo and arc.hi <= c.hi for c in coarse.arcs)


def test_cover_forward_invariance_with_margin():
    coarse = cover(GOLDEN, 4, prec=80)
    fine = cover(GOLDEN, 5, prec=80)
    slack = Fraction(1, 2**70)
    for arc in fine.arcs:
        for x in (arc.lo, (arc.lo + arc.hi) / 2, arc.hi):
            doubled = (2 * x) % 1
            assert _arc_distance(doubled, coarse.arcs) <= slack


def test_dense_orbit_widths_double_each_step():
    orbit = dense_orbit(GOLDEN, 12, prec=200)
    widths = [b.width for b in orbit]
    assert all(w2 == 2 * w1 for w1, w2 in zip(widths, widths[1:]))


def test_dense_orbit_stays_in_cover():
    cov = cover(GOLDEN, 5)
    orbit = dense_orbit(GOLDEN, 30, prec=220)
    for bracket in orbit:
        assert cov.covers(bracket.lo % 1)
        assert cov.covers(bracket.hi % 1)


def test_dense_orbit_precision_exhaustion():
    with pytest.raises(Exception) as info:
        dense_orbit(GOLDEN, 400, prec=64)
    assert "precision" in str(info.value).lower() or "width" in str(info.value).lower()


def test_arcs_hausdorff_point_cases():
    from quaddyn.cantor import CircleInterval

    a = [CircleInterval(Fraction(0), Fraction(1, 4))]
    assert arcs_hausdorff(a, a) == 0
    # Farthest point of either arc from the other is its own midpoint.
    b = [CircleInterval(Fraction(1, 2), Fraction(3, 4))]
    assert arcs_hausdorff(a, b) == Fraction(3, 8)


def test_cover_hausdorff_nonincreasing_in_depth():
    covers = {d: cover(GOLDEN, d, prec=80) for d in (0, 1, 2, 3, 4, 5)}
    dists = [arcs_hausdorff(covers[n].arcs, covers[n + 2].arcs) for n in (0, 1, 2, 3)]
    assert all(b <= a for a, b in zip(dists, dists[1:]))


@pytest.mark.parametrize("count", [1, 2])
def test_semiconjugacy_tiny_counts_pass(count):
    report = semiconjugacy_check(GOLDEN, count)
    assert report.passed
    assert report.first_violation is None


def test_semiconjugacy_golden_medium_run():
    report = semiconjugacy_check(GOLDEN, 60)
    assert report.passed
    assert report.undecided_pairs == 0
    assert report.count == 60
