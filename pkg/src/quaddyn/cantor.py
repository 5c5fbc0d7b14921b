"""Invariant Cantor sets of the doubling map carved out by a half circle.

Fix an irrational internal angle theta and let alpha be the external angle it
determines on the main cardioid.  The closed half circle with endpoints
alpha/2 and alpha/2 + 1/2 that contains alpha is the allowed arc; the points
whose forward doubling orbit never leaves it form a Cantor set on which
doubling acts, in cyclic order, like the rigid rotation by theta.

Everything here is interval arithmetic over exact rationals: alpha is only
known through a certified bracket, so membership comes back three-valued and
orbit positions come back as brackets rather than as bare points.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .angles import Angle
from .cardioid import external_angle
from .cfrac import CFExpansion
from .errors import InvariantError, PrecisionError

__all__ = [
    "CircleInterval",
    "HalfCircleArc",
    "CantorCover",
    "Membership",
    "SemiconjugacyReport",
    "build_arc",
    "membership",
    "cover",
    "dense_orbit",
    "semiconjugacy_check",
    "arcs_hausdorff",
]

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class CircleInterval:
    """Closed arc {x mod 1 : lo <= x <= hi} with 0 <= lo < 1 and hi <= lo + 1."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if not 0 <= self.lo < 1:
            raise InvariantError(f"arc start {self.lo} not normalized to [0, 1)")
        if not self.lo <= self.hi <= self.lo + 1:
            raise InvariantError(f"arc [{self.lo}, {self.hi}] spans more than a turn")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2 % 1

    def contains(self, x: Fraction) -> bool:
        return (x - self.lo) % 1 <= self.width

    def intersect(self, other: "CircleInterval") -> "CircleInterval | None":
        """Intersection, valid when the widths sum to less than a full turn."""
        if self.width + other.width >= 1:
            raise InvariantError("arc intersection needs combined width below 1")
        for turn in (-1, 0, 1):
            lo = max(self.lo, other.lo + turn)
            hi = min(self.hi, other.hi + turn)
            if lo <= hi:
                return CircleInterval(lo % 1, lo % 1 + (hi - lo))
        return None

    def halved(self) -> tuple["CircleInterval", "CircleInterval"]:
        """The two preimage arcs under doubling."""
        lo, hi = self.lo / 2, self.hi / 2
        return (CircleInterval(lo, hi), CircleInterval(lo + HALF, hi + HALF))

    def doubled(self) -> "CircleInterval":
        lo = (2 * self.lo) % 1
        return CircleInterval(lo, lo + 2 * self.width)


class Membership(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class HalfCircleArc:
    """Certified allowed half circle for an irrational internal angle.

    The true arc runs from gamma = alpha/2 to gamma + 1/2 and contains alpha;
    only brackets for the two endpoints and for alpha itself are known.  The
    high endpoint bracket is exactly the low one shifted by a half turn.
    """

    low: CircleInterval
    high: CircleInterval
    alpha: CircleInterval

    def __post_init__(self) -> None:
        if (self.high.lo - self.low.lo) % 1 != HALF or self.high.width != self.low.width:
            raise InvariantError("endpoint brackets are not antipodal")
        rel = (self.alpha.lo - self.low.lo) % 1
        if not (self.low.width < rel and rel + self.alpha.width < HALF):
            raise PrecisionError("cannot certify the alpha bracket inside the arc")

    @property
    def bracket_width(self) -> Fraction:
        return self.low.width

    def classify(self, lo: Fraction, width: Fraction = Fraction(0)) -> int:
        """Certified side of the bracket [lo, lo + width] on the circle.

        +1 when it certainly lies in the closed allowed arc, -1 when it
        certainly lies in the open complementary arc, 0 when the endpoint
        brackets are too coarse to tell.
        """
        if width >= Fraction(1, 4):
            raise PrecisionError("query bracket too wide to classify")
        rel = (lo - self.low.lo) % 1
        w = self.low.width
        if w <= rel and rel + width <= HALF:
            return 1
        if HALF + w < rel and rel + width < 1:
            return -1
        return 0

    def outer_arc(self) -> CircleInterval:
        """Closed arc certainly containing the allowed half circle."""
        return CircleInterval(self.low.lo, self.low.lo + HALF + self.low.width)


def _alpha_bracket(cf: CFExpansion, n: int) -> tuple[Fraction, Fraction]:
    """Exact rational bracket of width 2^(2-n) around alpha."""
    result = external_angle(cf, n)
    center = result.approx.fraction
    return center - result.bound, center + result.bound


def build_arc(cf: CFExpansion, prec: int = 64) -> HalfCircleArc:
    """Allowed-arc brackets of width at most 2^-prec, with dyadic endpoints.

    Computes alpha through the external-angle routine, halves its bracket to
    bracket the low endpoint, and keeps the half circle that provably
    contains alpha.  Construction raises PrecisionError when prec is too
    coarse to certify that containment; alpha is interior, so a few extra
    bits always settle it.
    """
    if cf.is_rational:
        raise InvariantError("the Cantor construction needs an irrational angle")
    if prec < 4:
        raise InvariantError("need prec >= 4")
    a_lo, a_hi = _alpha_bracket(cf, prec + 2)
    scale = 1 << (prec + 1)
    lo = Fraction((a_lo * scale).__floor__(), scale)
    hi = Fraction((a_hi * scale).__ceil__(), scale)
    if hi - lo > Fraction(1, 2**prec) * 2:
        raise PrecisionError("alpha bracket wider than requested")
    g_lo, width = (lo / 2) % 1, (hi - lo) / 2
    low = CircleInterval(g_lo, g_lo + width)
    high = CircleInterval((g_lo + HALF) % 1, (g_lo + HALF) % 1 + width)
    return HalfCircleArc(low=low, high=high, alpha=CircleInterval(a_lo % 1, a_lo % 1 + (a_hi - a_lo)))


def membership(
    a: Angle | Fraction | CircleInterval, arc: HalfCircleArc, depth: int = 64
) -> Membership:
    """Whether the doubling orbit of a stays in the allowed arc through depth.

    OUTSIDE is absolute: some iterate up to the given depth certainly falls
    in the open complementary arc, so the point is not in the Cantor set.
    INSIDE is absolute when the input is an exact rational whose eventual
    cycle closes within the depth budget (the whole orbit was certified);
    otherwise it only certifies the inspected iterates.  UNDECIDED means some
    iterate landed inside an endpoint bracket, where no side can be trusted.
    """
    if depth < 0:
        raise InvariantError("depth must be nonnegative")
    if isinstance(a, CircleInterval):
        lo, width = a.lo, a.width
    else:
        lo = (a.fraction if isinstance(a, Angle) else Fraction(a)) % 1
        width = Fraction(0)
    seen: set[Fraction] = set()
    gap_hit = False
    for _ in range(depth + 1):
        if width == 0:
            if lo in seen:
                break
            seen.add(lo)
        side = arc.classify(lo, width)
        if side == -1:
            return Membership.OUTSIDE
        if side == 0:
            gap_hit = True
        lo, width = (2 * lo) % 1, 2 * width
    return Membership.UNDECIDED if gap_hit else Membership.INSIDE


@dataclass(frozen=True)
class CantorCover:
    """Finite cover of the Cantor set by closed arcs with dyadic endpoints.

    The arcs are pairwise disjoint, of positive length, sorted by start, and
    the Cantor set is contained in their union.  hausdorff_bound is the
    claimed distance 2^-depth from the union down to the set itself; the
    depth-to-precision schedule behind it is heuristic, not a certified
    modulus.
    """

    depth: int
    arcs: tuple[CircleInterval, ...]
    hausdorff_bound: Fraction

    def covers(self, x: Fraction) -> bool:
        return any(a.contains(x % 1) for a in self.arcs)

    def total_length(self) -> Fraction:
        return sum((a.width for a in self.arcs), Fraction(0))


def cover(cf: CFExpansion, depth: int, prec: int | None = None) -> CantorCover:
    """Arcs left after removing depth generations of forbidden-arc preimages.

    Level zero is the allowed half circle itself (outer bracket); each
    refinement keeps the halves whose image stays covered.  Every endpoint is
    dyadic.  prec defaults to a schedule that keeps the endpoint-bracket
    fattening far below the arc scale 2^-depth.
    """
    if depth < 0:
        raise InvariantError("cover depth must be nonnegative")
    if prec is None:
        prec = 2 * depth + 24
    arc = build_arc(cf, prec)
    base = arc.outer_arc()
    arcs = [base]
    for _ in range(depth):
        refined: list[CircleInterval] = []
        for piece in arcs:
            for half in piece.halved():
                got = half.intersect(base)
                if got is not None:
                    refined.append(got)
        refined.sort(key=lambda a: a.lo)
        merged: list[CircleInterval] = []
        for piece in refined:
            if merged and piece.lo <= merged[-1].hi:
                top = max(merged[-1].hi, piece.hi)
                merged[-1] = CircleInterval(merged[-1].lo, top)
            else:
                merged.append(piece)
        if len(merged) > 1 and merged[-1].hi - 1 >= merged[0].lo:
            last, first = merged[-1], merged[0]
            merged = [CircleInterval(last.lo, max(last.hi, first.hi + 1))] + merged[1:-1]
        arcs = [a for a in merged if a.width > 0]
    return CantorCover(
        depth=depth,
        arcs=tuple(arcs),
        hausdorff_bound=Fraction(1, 2**depth),
    )


def dense_orbit(
    cf: CFExpansion, count: int, prec: int = 240
) -> list[CircleInterval]:
    """Brackets for the first `count` doubling iterates of alpha.

    The alpha bracket has width at most 2^-prec and doubling doubles it
    exactly, so the k-th bracket has width 2^(k-prec).  Iteration refuses to
    continue past width 1/4, where brackets stop being meaningful arcs.
    """
    if count < 1:
        raise InvariantError("need at least one orbit point")
    a_lo, a_hi = _alpha_bracket(cf, prec + 2)
    out: list[CircleInterval] = []
    lo, width = a_lo % 1, a_hi - a_lo
    for _ in range(count):
        if width > Fraction(1, 4):
            raise PrecisionError(
                f"orbit bracket beyond width 1/4; start near 2^-{count + 2} "
                "relative to the target width instead"
            )
        out.append(CircleInterval(lo, lo + width))
        lo, width = (2 * lo) % 1, 2 * width
    return out


@dataclass(frozen=True)
class SemiconjugacyReport:
    """Outcome of the cyclic-order comparison between the two orbits."""

    count: int
    passed: bool
    first_violation: int | None
    undecided_pairs: int
    alpha_exponent: int
    max_width: Fraction


def semiconjugacy_check(
    cf: CFExpansion, count: int, min_prec: int = 240
) -> SemiconjugacyReport:
    """Compare cyclic orders of the alpha orbit and the rotation orbit.

    Doubling restricted to the Cantor set should visit the circle in exactly
    the cyclic order the rigid rotation by theta does.  Orders are read off
    bracket midpoints, which is sound only when all brackets are pairwise
    disjoint; the alpha precision is escalated (starting from min_prec) until
    they are, because true orbit gaps can sit far below any fixed precision.
    Escalation failing to separate the brackets raises PrecisionError.
    """
    if count < 1:
        raise InvariantError("need at least one orbit point")
    theta_lo, theta_hi = cf.bracket(Fraction(1, 2**min_prec * 4 * max(count, 2)))
    rotation = []
    for k in range(count):
        lo = (k * theta_lo) % 1
        rotation.append(CircleInterval(lo, lo + k * (theta_hi - theta_lo)))
    if _overlapping_pairs(rotation):
        raise PrecisionError("rotation orbit brackets overlap; raise min_prec")

    exponent = min_prec + count + 2
    for _ in range(6):
        arcs = dense_orbit(cf, count, exponent)
        undecided = _overlapping_pairs(arcs)
        if undecided == 0:
            order_doubling = _cyclic_order(arcs)
            order_rotation = _cyclic_order(rotation)
            first = _first_rank_mismatch(order_doubling, order_rotation)
            return SemiconjugacyReport(
                count=count,
                passed=first is None,
                first_violation=first,
                undecided_pairs=0,
                alpha_exponent=exponent,
                max_width=max(a.width for a in arcs + rotation),
            )
        exponent *= 2
    raise PrecisionError(
        f"orbit brackets still overlap at alpha exponent {exponent // 2}"
    )


def _overlapping_pairs(arcs: list[CircleInterval]) -> int:
    """Count of pairs whose closed brackets meet; exhaustive and exact."""
    bad = 0
    for i in range(len(arcs)):
        for j in range(i + 1, len(arcs)):
            a, b = arcs[i], arcs[j]
            forward = (b.midpoint - a.midpoint) % 1
            gap = min(forward, 1 - forward)
            if gap <= (a.width + b.width) / 2:
                bad += 1
    return bad


def _cyclic_order(arcs: list[CircleInterval]) -> tuple[int, ...]:
    base = arcs[0].midpoint
    keyed = sorted(((a.midpoint - base) % 1, i) for i, a in enumerate(arcs))
    return tuple(i for _, i in keyed)


def _first_rank_mismatch(
    left: tuple[int, ...], right: tuple[int, ...]
) -> int | None:
    rank_left = {idx: pos for pos, idx in enumerate(left)}
    rank_right = {idx: pos for pos, idx in enumerate(right)}
    for idx in sorted(rank_left):
        if rank_left[idx] != rank_right[idx]:
            return idx
    return None


def arcs_hausdorff(
    first: list[CircleInterval], second: list[CircleInterval]
) -> Fraction:
    """Exact Hausdorff distance between two finite unions of closed arcs.

    The distance function to an arc union is piecewise linear, so the
    supremum over the other union is attained either at an arc endpoint or
    at the midpoint of a complementary gap; both candidate sets are finite.
    """
    if not first or not second:
        raise InvariantError("need nonempty arc sets")
    return max(_sup_distance(first, second), _sup_distance(second, first))


def _sup_distance(
    source: list[CircleInterval], target: list[CircleInterval]
) -> Fraction:
    candidates: list[Fraction] = []
    for a in source:
        candidates.append(a.lo % 1)
        candidates.append(a.hi % 1)
    spots = sorted({(a.lo % 1, a.hi % 1) for a in target})
    for (lo1, hi1), (lo2, _) in zip(spots, spots[1:] + spots[:1]):
        mid = (hi1 % 1 + ((lo2 - hi1) % 1) / 2) % 1
        if any(s.contains(mid) for s in source):
            candidates.append(mid)
    best = Fraction(0)
    for x in candidates:
        d = min(_point_arc_distance(x, t) for t in target)
        if d > best:
            best = d
    return best


def _point_arc_distance(x: Fraction, arc: CircleInterval) -> Fraction:
    if arc.contains(x):
        return Fraction(0)
    to_lo = (arc.lo - x) % 1
    from_hi = (x - arc.hi) % 1
    return min(min(to_lo, 1 - to_lo), min(from_hi, 1 - from_hi))
